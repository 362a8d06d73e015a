// src/mmi/mmi-objectives.cc
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

#include "mmi/mmi-objectives.h"

#include <stdexcept>

#include "base/logging.h"
#include "base/text-utils.h"

namespace latmmi {

const char *NumeratorModeName(NumeratorMode mode) {
  switch (mode) {
    case NumeratorMode::kFixed: return "fixed";
    case NumeratorMode::kViterbi: return "viterbi";
    case NumeratorMode::kAncestral: return "ancestral";
  }
  return "unknown";
}

NumeratorMode ParseNumeratorMode(const std::string &name) {
  if (name == "fixed") return NumeratorMode::kFixed;
  if (name == "viterbi") return NumeratorMode::kViterbi;
  if (name == "ancestral") return NumeratorMode::kAncestral;
  throw std::invalid_argument("unknown numerator mode '" + name +
                              "' (expected fixed, viterbi or ancestral)");
}

NumeratorSpec NumeratorSpec::Fixed(Path path) {
  NumeratorSpec spec;
  spec.mode = NumeratorMode::kFixed;
  spec.fixed_path = std::move(path);
  return spec;
}

NumeratorSpec NumeratorSpec::Sampled(NumeratorMode mode,
                                     std::shared_ptr<const Lattice> lattice) {
  NumeratorSpec spec;
  spec.mode = mode;
  spec.numerator_lattice = std::move(lattice);
  return spec;
}

Path ResolveNumerator(const NumeratorSpec &num, const ScoreTable &scores,
                      uint64 seed) {
  switch (num.mode) {
    case NumeratorMode::kFixed:
      if (!num.fixed_path)
        throw std::invalid_argument("numerator mode 'fixed' needs a fixed path");
      return *num.fixed_path;
    case NumeratorMode::kViterbi:
      if (!num.numerator_lattice)
        throw std::invalid_argument(
            "numerator mode 'viterbi' needs a numerator lattice");
      return ViterbiBestPath(*num.numerator_lattice, scores).path;
    case NumeratorMode::kAncestral: {
      if (!num.numerator_lattice)
        throw std::invalid_argument(
            "numerator mode 'ancestral' needs a numerator lattice");
      BackwardTable beta = BackwardFill(*num.numerator_lattice, scores);
      return AncestralSample(*num.numerator_lattice, scores, beta, seed);
    }
  }
  throw std::invalid_argument("bad numerator mode");
}

MmiEvaluation TrueMmi(const Lattice &numerator_graph,
                      const Lattice &denominator_graph,
                      const ScoreTable &scores) {
  CheckCompatible(numerator_graph, scores, "TrueMmi (numerator)");
  CheckCompatible(denominator_graph, scores, "TrueMmi (denominator)");

  MmiEvaluation eval;
  std::vector<double> num_alpha = ForwardScores(numerator_graph, scores);
  BackwardTable num_beta = BackwardFill(numerator_graph, scores);
  std::vector<double> den_alpha = ForwardScores(denominator_graph, scores);
  BackwardTable den_beta = BackwardFill(denominator_graph, scores);
  eval.numerator_logprob = num_beta.Total(numerator_graph);
  eval.denominator_logprob = den_beta.Total(denominator_graph);
  eval.loss = eval.denominator_logprob - eval.numerator_logprob;
  if (eval.loss < -1e-9)
    LATMMI_WARN("TrueMmi: negative loss " << FormatScore(eval.loss)
                << "; numerator paths are not covered by the denominator");

  OccupancyTable num_gamma = OccupanciesFromTables(
      numerator_graph, scores, num_alpha, num_beta.beta, eval.numerator_logprob);
  eval.grad = OccupanciesFromTables(denominator_graph, scores, den_alpha,
                                    den_beta.beta, eval.denominator_logprob);
  for (int32 t = 0; t < scores.NumFrames(); ++t)
    for (PdfId p = 1; p <= scores.NumPdfs(); ++p) eval.grad(t, p) -= num_gamma(t, p);
  return eval;
}

MmiEvaluation BaselineLatticeMmi(const NumeratorSpec &num,
                                 const Lattice &den_lattice,
                                 const ScoreTable &scores, uint64 seed) {
  CheckCompatible(den_lattice, scores, "BaselineLatticeMmi");
  Path num_path = ResolveNumerator(num, scores, seed);
  if (num_path.NumFrames() != scores.NumFrames())
    throw std::invalid_argument(
        "BaselineLatticeMmi: numerator path length does not match scores");

  MmiEvaluation eval;
  std::vector<double> alpha = ForwardScores(den_lattice, scores);
  BackwardTable beta = BackwardFill(den_lattice, scores);
  eval.denominator_logprob = beta.Total(den_lattice);
  eval.numerator_logprob = PathScore(num_path, scores);
  eval.loss = eval.denominator_logprob - eval.numerator_logprob;
  eval.grad = OccupanciesFromTables(den_lattice, scores, alpha, beta.beta,
                                    eval.denominator_logprob);
  for (int32 t = 0; t < num_path.NumFrames(); ++t)
    eval.grad(t, num_path.pdfs[t]) -= 1.0;
  eval.numerator_path = std::move(num_path);
  return eval;
}

MmiEvaluation OtfMmi(const NumeratorSpec &num, const Lattice &raw_den_lattice,
                     const ScoreTable &scores, uint64 seed) {
  return BaselineLatticeMmi(
      num, DeterminizeBestAlignment(raw_den_lattice, scores), scores, seed);
}

}  // namespace latmmi
