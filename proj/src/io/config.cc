// src/io/config.cc
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

#include "io/config.h"

#include <algorithm>
#include <charconv>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "base/random.h"
#include "base/text-utils.h"

namespace latmmi {

namespace {

using Setter = std::function<void(const std::string &)>;
using Getter = std::function<std::string()>;

struct Field {
  Setter set;
  Getter get;
};

int32 ToInt(const std::string &key, const std::string &v) {
  int32 x;
  if (!ParseInt(v, &x)) throw std::invalid_argument("config: " + key + ": bad integer '" + v + "'");
  return x;
}

double ToDouble(const std::string &key, const std::string &v) {
  double x;
  if (!ParseDouble(v, &x)) throw std::invalid_argument("config: " + key + ": bad number '" + v + "'");
  return x;
}

uint64 ToSeed(const std::string &key, const std::string &v) {
  uint64 x;
  auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw std::invalid_argument("config: " + key + ": bad seed '" + v + "'");
  return x;
}

bool ToBool(const std::string &key, const std::string &v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument("config: " + key + ": expected true or false, got '" + v + "'");
}

Field IntField(const std::string &key, int32 *p) {
  return {[key, p](const std::string &v) { *p = ToInt(key, v); },
          [p] { return std::to_string(*p); }};
}
Field DoubleField(const std::string &key, double *p) {
  return {[key, p](const std::string &v) { *p = ToDouble(key, v); },
          [p] { return FormatDouble(*p); }};
}
Field SeedField(const std::string &key, uint64 *p) {
  return {[key, p](const std::string &v) { *p = ToSeed(key, v); },
          [p] { return std::to_string(*p); }};
}
Field BoolField(const std::string &key, bool *p) {
  return {[key, p](const std::string &v) { *p = ToBool(key, v); },
          [p] { return std::string(*p ? "true" : "false"); }};
}

// Ordered (section, key) -> accessor table over one config object.
std::vector<std::pair<std::string, std::vector<std::pair<std::string, Field>>>>
Schema(ExperimentConfig *c) {
  SynthConfig &s = c->synth;
  CeConfig &ce = c->ce;
  TrainConfig &t = c->train;
  return {
      {"synth",
       {{"vocab_size", IntField("synth.vocab_size", &s.vocab_size)},
        {"num_phones", IntField("synth.num_phones", &s.num_phones)},
        {"max_phones_per_word", IntField("synth.max_phones_per_word", &s.max_phones_per_word)},
        {"max_sentence_len", IntField("synth.max_sentence_len", &s.max_sentence_len)},
        {"frames", IntField("synth.frames", &s.frames)},
        {"feature_dim", IntField("synth.feature_dim", &s.feature_dim)},
        {"noise", DoubleField("synth.noise", &s.noise)},
        {"template_scale", DoubleField("synth.template_scale", &s.template_scale)},
        {"lm_spread", DoubleField("synth.lm_spread", &s.lm_spread)},
        {"num_train", IntField("synth.num_train", &s.num_train)},
        {"num_dev", IntField("synth.num_dev", &s.num_dev)},
        {"num_test", IntField("synth.num_test", &s.num_test)},
        {"enumeration_cap", DoubleField("synth.enumeration_cap", &s.enumeration_cap)},
        {"seed", SeedField("synth.seed", &s.seed)}}},
      {"ce",
       {{"learning_rate", DoubleField("ce.learning_rate", &ce.learning_rate)},
        {"iterations", IntField("ce.iterations", &ce.iterations)},
        {"init_scale", DoubleField("ce.init_scale", &ce.init_scale)},
        {"seed", SeedField("ce.seed", &ce.seed)}}},
      {"train",
       {{"mode",
         {[&t](const std::string &v) { t.mode = ParseDenominatorMode(v); },
          [&t] { return std::string(DenominatorModeName(t.mode)); }}},
        {"numerator",
         {[&t](const std::string &v) { t.numerator = ParseNumeratorMode(v); },
          [&t] { return std::string(NumeratorModeName(t.numerator)); }}},
        {"K", IntField("train.K", &t.K)},
        {"learning_rate", DoubleField("train.learning_rate", &t.learning_rate)},
        {"iterations", IntField("train.iterations", &t.iterations)},
        {"batch_size", IntField("train.batch_size", &t.batch_size)},
        {"seed", SeedField("train.seed", &t.seed)},
        {"check_theorem", BoolField("train.check_theorem", &t.check_theorem)},
        {"parallel", BoolField("train.parallel", &t.parallel)}}},
  };
}

}  // namespace

void ExperimentConfig::Check() const {
  synth.Check();
  train.Check();
  if (ce.iterations < 0 || !(ce.learning_rate >= 0.0) || !(ce.init_scale >= 0.0))
    throw std::invalid_argument("config: [ce] values must be non-negative");
}

void ExperimentConfig::OverrideSeed(uint64 seed) {
  synth.seed = DeriveSeed(seed, 1);
  ce.seed = DeriveSeed(seed, 2);
  train.seed = DeriveSeed(seed, 3);
}

ExperimentConfig ParseConfigString(const std::string &text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream is(text);
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error &e) {
    throw ParseError(static_cast<int>(e.line()), "config: " + e.message());
  }
  ExperimentConfig config;
  auto schema = Schema(&config);
  for (const auto &[section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw std::invalid_argument("config: key '" + section +
                                  "' outside of any section");
    auto sec = std::find_if(schema.begin(), schema.end(),
                            [&](const auto &s) { return s.first == section; });
    if (sec == schema.end())
      throw std::invalid_argument("config: unknown section [" + section + "]");
    for (const auto &[key, value] : body) {
      auto field = std::find_if(sec->second.begin(), sec->second.end(),
                                [&](const auto &f) { return f.first == key; });
      if (field == sec->second.end())
        throw std::invalid_argument("config: unknown key '" + key +
                                    "' in section [" + section + "]");
      field->second.set(value.data());
    }
  }
  config.Check();
  return config;
}

ExperimentConfig ReadConfigFile(const std::string &path) {
  return ParseConfigString(ReadFileToString(path));
}

std::string ConfigToString(const ExperimentConfig &config) {
  ExperimentConfig copy = config;
  std::ostringstream os;
  bool first = true;
  for (const auto &[section, fields] : Schema(&copy)) {
    if (!first) os << '\n';
    first = false;
    os << '[' << section << "]\n";
    for (const auto &[key, field] : fields) os << key << " = " << field.get() << '\n';
  }
  return os.str();
}

}  // namespace latmmi
