// src/io/metrics-io.cc
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "io/metrics-io.h"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "base/text-utils.h"
#include "json.hpp"

namespace latmmi {

using nlohmann::ordered_json;

std::string MetricsToJsonLine(const MetricsRecord &r) {
  ordered_json j;
  j["iteration"] = r.iteration;
  j["mode"] = r.mode;
  j["numerator_mode"] = r.numerator_mode;
  j["loss_objective"] = r.loss_objective;
  j["loss_true"] = r.loss_true;
  j["loss_baseline"] = r.loss_baseline;
  j["loss_otf"] = r.loss_otf;
  j["normalization_residual"] = r.normalization_residual;
  j["ineq13_min_residual"] = r.group_bound_min_residual;
  j["ineq14_residual"] = r.reference_bound_residual;
  j["muhat_loss_gap"] = r.muhat_loss_gap;
  j["selection_score_gap"] = r.selection_score_gap;
  j["theorem_checked"] = r.theorem_checked;
  j["theorem_ok"] = r.theorem_ok;
  j["heldout_sentence_error"] = r.heldout_sentence_error;
  j["heldout_true_loss"] = r.heldout_true_loss;
  for (const auto &[key, value] : j.items())
    if (value.is_number_float() && !std::isfinite(value.get<double>()))
      throw std::invalid_argument("metrics: non-finite " + key + " at iteration " +
                                  std::to_string(r.iteration));
  return j.dump();
}

MetricsRecord ParseMetricsJsonLine(const std::string &line) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const ordered_json::exception &e) {
    throw std::invalid_argument(std::string("metrics: ") + e.what());
  }
  MetricsRecord r;
  try {
    r.iteration = j.at("iteration").get<int32>();
    r.mode = j.at("mode").get<std::string>();
    r.numerator_mode = j.at("numerator_mode").get<std::string>();
    r.loss_objective = j.at("loss_objective").get<double>();
    r.loss_true = j.at("loss_true").get<double>();
    r.loss_baseline = j.at("loss_baseline").get<double>();
    r.loss_otf = j.at("loss_otf").get<double>();
    r.normalization_residual = j.at("normalization_residual").get<double>();
    r.group_bound_min_residual = j.at("ineq13_min_residual").get<double>();
    r.reference_bound_residual = j.at("ineq14_residual").get<double>();
    r.muhat_loss_gap = j.at("muhat_loss_gap").get<double>();
    r.selection_score_gap = j.at("selection_score_gap").get<double>();
    r.theorem_checked = j.at("theorem_checked").get<bool>();
    r.theorem_ok = j.at("theorem_ok").get<bool>();
    r.heldout_sentence_error = j.at("heldout_sentence_error").get<double>();
    r.heldout_true_loss = j.at("heldout_true_loss").get<double>();
  } catch (const ordered_json::exception &e) {
    throw std::invalid_argument(std::string("metrics: ") + e.what());
  }
  return r;
}

std::vector<MetricsRecord> ReadMetricsFile(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::vector<MetricsRecord> out;
  std::string line;
  while (std::getline(is, line))
    if (!line.empty()) out.push_back(ParseMetricsJsonLine(line));
  return out;
}

MetricsWriter::MetricsWriter(const std::string &path) : path_(path) {
  std::ofstream os(path_, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + path_);
}

void MetricsWriter::Write(const MetricsRecord &record) {
  std::ofstream os(path_, std::ios::app);
  os << MetricsToJsonLine(record) << '\n';
  os.flush();
  if (!os) throw std::runtime_error("write failed: " + path_);
}

}  // namespace latmmi
