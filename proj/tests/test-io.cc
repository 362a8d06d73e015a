// tests/test-io.cc
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

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "base/text-utils.h"
#include "doctest.h"
#include "io/config.h"
#include "io/data-io.h"
#include "io/metrics-io.h"
#include "io/pipeline.h"
#include "lat/lattice-io.h"

using namespace latmmi;

namespace {

std::filesystem::path TempDir(const std::string &name) {
  auto dir = std::filesystem::temp_directory_path() / ("latmmi-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

SynthConfig TinySynth() {
  SynthConfig c;
  c.vocab_size = 3;
  c.num_phones = 2;
  c.frames = 7;
  c.feature_dim = 2;
  c.num_train = 4;
  c.num_dev = 3;
  c.num_test = 3;
  return c;
}

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("empty text gives defaults") {
    const ExperimentConfig c = ParseConfigString("");
    CHECK(c.synth.vocab_size == SynthConfig().vocab_size);
    CHECK(c.train.iterations == TrainConfig().iterations);
  }
  SUBCASE("values are read") {
    const ExperimentConfig c = ParseConfigString(
        "[synth]\nvocab_size = 7\nnoise = 0.5\n[train]\nmode = baseline\n"
        "numerator = viterbi\ncheck_theorem = false\n");
    CHECK(c.synth.vocab_size == 7);
    CHECK(c.synth.noise == 0.5);
    CHECK(c.train.mode == DenominatorMode::kBaseline);
    CHECK(c.train.numerator == NumeratorMode::kViterbi);
    CHECK_FALSE(c.train.check_theorem);
  }
  SUBCASE("unknown keys and sections are rejected") {
    CHECK_THROWS_AS(ParseConfigString("[synth]\nvocab = 3\n"), std::invalid_argument);
    CHECK_THROWS_AS(ParseConfigString("[model]\nx = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(ParseConfigString("[train]\nK = four\n"), std::invalid_argument);
    CHECK_THROWS_AS(ParseConfigString("[train]\ncheck_theorem = maybe\n"), std::invalid_argument);
    CHECK_THROWS_AS(ParseConfigString("[train]\nmode = fast\n"), std::invalid_argument);
  }
  SUBCASE("syntax errors carry a line number") {
    try {
      ParseConfigString("[synth]\nfoo\n");
      FAIL("expected a parse error");
    } catch (const ParseError &e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("round trip") {
    ExperimentConfig c;
    c.synth.noise = 0.75;
    c.train.K = 6;
    c.train.numerator = NumeratorMode::kAncestral;
    c.ce.seed = 12345678901234ULL;
    const ExperimentConfig d = ParseConfigString(ConfigToString(c));
    CHECK(ConfigToString(d) == ConfigToString(c));
    CHECK(d.ce.seed == 12345678901234ULL);
  }
  SUBCASE("seed override touches every stream") {
    ExperimentConfig a, b;
    a.OverrideSeed(3);
    b.OverrideSeed(4);
    CHECK(a.synth.seed != b.synth.seed);
    CHECK(a.ce.seed != b.ce.seed);
    CHECK(a.train.seed != b.train.seed);
  }
}

TEST_CASE("dataset and scorer files") {
  const ToyTask task = MakeToyTask(TinySynth());
  const ToyDatasets data = SynthAll(task);
  const auto back = ParseDataset(DatasetToString(data.train), task.space);
  REQUIRE(back.size() == data.train.size());
  for (size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].features == data.train[i].features);
    CHECK(back[i].ref_sentence == data.train[i].ref_sentence);
    CHECK(back[i].true_alignment.pdfs == data.train[i].true_alignment.pdfs);
  }
  CHECK_THROWS_AS(ParseDataset("DATASET v2\n", task.space), ParseError);

  const ScorerParams p = ScorerParams::Random(task.space.NumPdfs(), 2, 1.0, 4);
  CHECK(ParseScorer(ScorerToString(p)) == p);
  CHECK_THROWS_AS(ParseScorer("SCORER v1\npdfs 2\ndim 1\nbias 0\n"), ParseError);

  const auto dir = TempDir("data");
  WriteDatasetFile(data.dev, (dir / "dev.data").string());
  CHECK(ReadDatasetFile((dir / "dev.data").string(), task.space).size() == data.dev.size());
  WriteScorerFile(p, (dir / "m").string());
  CHECK(ReadScorerFile((dir / "m").string()) == p);
  CHECK_THROWS(ReadScorerFile((dir / "missing").string()));
  std::filesystem::remove_all(dir);
}

TEST_CASE("alignment and score table text") {
  const Lattice lat(2, {0, 1, 2}, 0, {2}, {{0, 1, 1, 0, -1.0}, {1, 2, 2, 7, -0.5}});
  const Path p = MakePath(lat, {0, 1});
  CHECK(ParseAlignment(AlignmentToString(p), lat) == p);
  CHECK_THROWS(ParseAlignment("ALIGNMENT v1\narcs 1 0\n", lat));
  ScoreTable s(2, 3, 0.0);
  s(1, 3) = -0.125;
  CHECK(ParseScoreTable(ScoreTableToString(s)) == s);
}

TEST_CASE("metrics lines") {
  MetricsRecord r;
  r.iteration = 4;
  r.mode = "otf";
  r.numerator_mode = "fixed";
  r.loss_true = 0.1;
  r.reference_bound_residual = 1e-300;
  r.theorem_checked = true;
  const std::string line = MetricsToJsonLine(r);
  CHECK(line.find('\n') == std::string::npos);
  const MetricsRecord b = ParseMetricsJsonLine(line);
  CHECK(b.iteration == 4);
  CHECK(b.loss_true == 0.1);
  CHECK(b.reference_bound_residual == 1e-300);
  CHECK(MetricsToJsonLine(b) == line);
  r.loss_otf = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS(MetricsToJsonLine(r));

  const auto dir = TempDir("metrics");
  const std::string path = (dir / "m.jsonl").string();
  {
    MetricsWriter w(path);
    w.Write(b);
    w.Write(b);
  }
  CHECK(ReadMetricsFile(path).size() == 2);
  { MetricsWriter w(path); }
  CHECK(ReadMetricsFile(path).empty());
  std::filesystem::remove_all(dir);
}

TEST_CASE("utterance lattice files") {
  ExperimentConfig c;
  c.synth = TinySynth();
  c.ce.iterations = 5;
  c.train.K = 2;
  const PreparedExperiment exp = PrepareExperiment(c);
  REQUIRE(exp.lattices.size() == exp.data.train.size());
  const auto dir = TempDir("lattices");
  for (size_t i = 0; i < exp.lattices.size(); ++i)
    WriteUtteranceLattices(dir.string(), int32(i), exp.lattices[i]);
  CHECK(std::filesystem::exists(UtteranceStem(dir.string(), 0) + ".num.ali"));
  for (size_t i = 0; i < exp.lattices.size(); ++i) {
    const UtteranceLattices b = ReadUtteranceLattices(dir.string(), int32(i));
    CHECK(b.raw == exp.lattices[i].raw);
    CHECK(b.det == exp.lattices[i].det);
    CHECK(*b.num == *exp.lattices[i].num);
    CHECK(b.fixed_path == exp.lattices[i].fixed_path);
    CHECK(b.hypotheses == exp.lattices[i].hypotheses);
  }
  const LatticeSizeSummary s = SummarizeLattices(exp.lattices);
  CHECK(s.ArcRatio() >= 1.0);
  CHECK(s.PathRatio() >= 1.0);
  std::filesystem::remove_all(dir);
}
