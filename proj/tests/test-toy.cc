// tests/test-toy.cc
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

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "lat/lattice-algorithms.h"
#include "parallel/batch-objective.h"
#include "toy/decode.h"
#include "toy/hmm-topology.h"
#include "toy/lattice-gen.h"
#include "toy/scorer.h"
#include "toy/synth-data.h"
#include "toy/training.h"

using namespace latmmi;

namespace {

Lexicon SmallLexicon() {
  Lexicon lex;
  lex.num_phones = 2;
  lex.word_phones = {{1}, {2}, {1, 2}};
  return lex;
}

HmmTopology HalfLoops(int32 phones) {
  HmmTopology topo;
  topo.self_loop_logprob.assign(phones, {std::log(0.5), std::log(0.5), std::log(0.5)});
  return topo;
}

SynthConfig SmallSynth() {
  SynthConfig c;
  c.vocab_size = 3;
  c.num_phones = 2;
  c.max_phones_per_word = 2;
  c.max_sentence_len = 2;
  c.frames = 7;
  c.feature_dim = 3;
  c.num_train = 8;
  c.num_dev = 6;
  c.num_test = 6;
  c.seed = 5;
  return c;
}

struct SmallSetup {
  ToyTask task;
  ToyDatasets data;
  ScorerParams ce;
  std::vector<UtteranceLattices> lattices;
};

SmallSetup MakeSetup(int32 K = 3) {
  SmallSetup s;
  s.task = MakeToyTask(SmallSynth());
  s.data = SynthAll(s.task);
  CeConfig ce;
  ce.iterations = 20;
  s.ce = CePretrain(s.data.train, s.task.space.NumPdfs(), ce);
  s.lattices = MakeLattices(s.task.space, s.data.train, s.ce, K);
  return s;
}

}  // namespace

TEST_CASE("sentence graphs") {
  const Lexicon lex = SmallLexicon();
  const HmmTopology topo = HalfLoops(2);
  SUBCASE("one-phone word path counts") {
    CHECK(SentenceStates({1}, lex) == 3);
    CHECK(CountPaths(BuildSentenceGraph({1}, lex, topo, 0.0, 3)) == 1.0);
    CHECK(CountPaths(BuildSentenceGraph({1}, lex, topo, 0.0, 4)) == 3.0);
    CHECK(SentencePathCount({1}, lex, 4) == 3.0);
  }
  SUBCASE("too few frames is rejected") {
    CHECK_THROWS_AS(BuildSentenceGraph({3}, lex, topo, 0.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(BuildSentenceGraph({}, lex, topo, 0.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(BuildSentenceGraph({4}, lex, topo, 0.0, 5), std::invalid_argument);
  }
  SUBCASE("every path realizes the sentence") {
    const Lattice g = BuildSentenceGraph({1, 2}, lex, topo, -0.25, 9);
    CHECK(Validate(g).empty());
    for (const auto &p : EnumeratePaths(g, ScoreTable(9, 6, 0.0), 1e5))
      CHECK(p.path.words == WordSequence{1, 2});
    CHECK(CountPaths(g) == SentencePathCount({1, 2}, lex, 9));
  }
  SUBCASE("transition weights sum to one per alignment set") {
    // With all scores zero the forward total is the probability of ending
    // in the final state at exactly T frames, which is at most 1.
    const Lattice g = BuildSentenceGraph({1}, lex, topo, 0.0, 5);
    CHECK(ForwardLogSum(g, ScoreTable(5, 6, 0.0)) <= 1e-12);
  }
}

TEST_CASE("hypothesis space") {
  const Lexicon lex = SmallLexicon();
  const HmmTopology topo = HalfLoops(2);
  const HypothesisSpace space = HypothesisSpace::Build(lex, topo, {}, 6, 2);
  SUBCASE("sentences that do not fit are excluded") {
    // Words 1 and 2 need 3 frames, word 3 needs 6.
    CHECK(space.NumSentences() == 3 + 4);
    CHECK(space.IndexOf({3, 1}) == -1);
    CHECK(space.IndexOf({3}) >= 0);
    CHECK(space.IndexOf({2, 1}) >= 0);
  }
  SUBCASE("LM is normalized") {
    std::vector<double> lm;
    for (int32 i = 0; i < space.NumSentences(); ++i) lm.push_back(space.LmLogProb(i));
    CHECK(std::abs(LogSumExp(lm)) <= 1e-12);
  }
  SUBCASE("full graph is the union of the sentence graphs") {
    double total = 0.0;
    for (int32 i = 0; i < space.NumSentences(); ++i)
      total += CountPaths(space.SentenceGraph(i));
    CHECK(CountPaths(space.FullGraph()) == total);
    CHECK(space.FullGraphPathCount() == total);
    CHECK(HypothesisSpace::CountFullGraphPaths(lex, 6, 2) == total);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n;
    ScoreTable s(6, 6, 0.0);
    for (int32 t = 0; t < 6; ++t)
      for (double &v : s.Row(t)) v = n(rng);
    std::vector<double> parts;
    for (int32 i = 0; i < space.NumSentences(); ++i)
      parts.push_back(ForwardLogSum(space.SentenceGraph(i), s));
    CHECK(std::abs(ForwardLogSum(space.FullGraph(), s) - LogSumExp(parts)) <= 1e-12);
    const Lattice u = space.UnionGraph({0, 2});
    CHECK(std::abs(ForwardLogSum(u, s) - LogSumExp(std::vector<double>{parts[0], parts[2]})) <= 1e-12);
  }
  SUBCASE("path cap") {
    CHECK_THROWS_AS(HypothesisSpace::Build(lex, topo, {}, 6, 2, 10.0), std::length_error);
  }
}

TEST_CASE("scorer") {
  SUBCASE("zero parameters give a uniform posterior") {
    const ScorerParams p = ScorerParams::Zero(4, 3);
    FeatureMatrix f = FeatureMatrix::Random(5, 3);
    const ScoreTable s = ScoreFrames(p, f);
    for (int32 t = 0; t < 5; ++t)
      for (PdfId q = 1; q <= 4; ++q) CHECK(s(t, q) == doctest::Approx(-std::log(4.0)));
  }
  SUBCASE("rows are log-distributions") {
    const ScorerParams p = ScorerParams::Random(6, 3, 2.0, 9);
    FeatureMatrix f = FeatureMatrix::Random(7, 3);
    const ScoreTable s = ScoreFrames(p, f);
    for (int32 t = 0; t < 7; ++t) {
      double sum = 0.0;
      for (double v : s.Row(t)) sum += std::exp(v);
      CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
  }
  SUBCASE("dimension mismatch is rejected") {
    const ScorerParams p = ScorerParams::Zero(4, 3);
    CHECK_THROWS_AS(ScoreFrames(p, FeatureMatrix::Zero(2, 5)), std::invalid_argument);
  }
  SUBCASE("backward matches finite differences") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n;
    ScorerParams p = ScorerParams::Random(4, 3, 1.0, 10);
    FeatureMatrix f(5, 3);
    for (int32 i = 0; i < f.size(); ++i) f.data()[i] = n(rng);
    PdfMatrix g(5, 4, 0.0);
    for (int32 t = 0; t < 5; ++t)
      for (double &v : g.Row(t)) v = n(rng);
    auto loss = [&](const ScorerParams &q) {
      const ScoreTable s = ScoreFrames(q, f);
      double l = 0.0;
      for (int32 t = 0; t < 5; ++t)
        for (PdfId k = 1; k <= 4; ++k) l += g(t, k) * s(t, k);
      return l;
    };
    const ScorerParams an = ScorerBackward(p, f, ScoreFrames(p, f), g);
    const double h = 1e-6;
    for (int32 r = 0; r < 4; ++r) {
      for (int32 c = 0; c < 3; ++c) {
        ScorerParams a = p, b = p;
        a.weight(r, c) += h;
        b.weight(r, c) -= h;
        CHECK(an.weight(r, c) == doctest::Approx((loss(a) - loss(b)) / (2 * h)).epsilon(1e-6));
      }
      ScorerParams a = p, b = p;
      a.bias(r) += h;
      b.bias(r) -= h;
      CHECK(an.bias(r) == doctest::Approx((loss(a) - loss(b)) / (2 * h)).epsilon(1e-6));
    }
  }
}

TEST_CASE("synthetic data") {
  const ToyTask task = MakeToyTask(SmallSynth());
  const auto a = SynthDataset(task, 5, 77);
  const auto b = SynthDataset(task, 5, 77);
  REQUIRE(a.size() == 5);
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].features == b[i].features);
    CHECK(a[i].ref_words == b[i].ref_words);
    CHECK(a[i].true_alignment.words == a[i].ref_words);
    CHECK(task.space.Sentence(a[i].ref_sentence) == a[i].ref_words);
    CHECK(a[i].features.rows() == task.space.NumFrames());
  }
  SynthConfig bad = SmallSynth();
  bad.noise = -1.0;
  CHECK_THROWS_AS(bad.Check(), std::invalid_argument);
}

TEST_CASE("CE pretraining") {
  const ToyTask task = MakeToyTask(SmallSynth());
  const ToyDatasets data = SynthAll(task);
  CeConfig none;
  none.iterations = 0;
  CHECK(CePretrain(data.train, task.space.NumPdfs(), none) ==
        ScorerParams::Zero(task.space.NumPdfs(), SmallSynth().feature_dim));
  CeConfig ce;
  ce.iterations = 30;
  const ScorerParams a = CePretrain(data.train, task.space.NumPdfs(), ce);
  const ScorerParams b = CePretrain(data.train, task.space.NumPdfs(), ce);
  CHECK(a == b);
  CHECK(FrameCrossEntropy(a, data.train) < std::log(double(task.space.NumPdfs())));
  CHECK(FrameAccuracy(a, data.train) > 1.0 / task.space.NumPdfs());
}

TEST_CASE("recognition pass and numerator") {
  const SmallSetup s = MakeSetup();
  const HypothesisSpace &space = s.task.space;
  for (size_t i = 0; i < s.data.train.size(); ++i) {
    const Utterance &u = s.data.train[i];
    const ScoreTable ce = ScoreFrames(s.ce, u.features);
    const RecognitionResult r = RecognitionPass(space, ce, 3, u.ref_sentence);
    CHECK(r.kept.size() == 3);
    CHECK(std::find(r.kept.begin(), r.kept.end(), u.ref_sentence) != r.kept.end());
    CHECK(CountPaths(r.det) == 3.0);
    double raw_paths = 0.0;
    for (int32 k : r.kept) raw_paths += CountPaths(space.SentenceGraph(k));
    CHECK(CountPaths(r.raw) == raw_paths);

    const RecognitionResult one = RecognitionPass(space, ce, 1, u.ref_sentence);
    CHECK(one.kept == std::vector<int32>{u.ref_sentence});

    const NumeratorResult num = MakeNumerator(space, u.ref_sentence, ce);
    CHECK(num.fixed_path.words == u.ref_words);
    CHECK(PathScore(num.fixed_path, ce) == doctest::Approx(ViterbiBestPath(*num.lattice, ce).score));

    const UtteranceLattices &l = s.lattices[i];
    CHECK(l.hypotheses.size() == 3);
    Path found;
    CHECK(FindMatchingPath(l.det, l.fixed_path.pdfs, l.fixed_path.words, &found));
  }
  CHECK_THROWS_AS(RecognitionPass(space, ScoreTable(space.NumFrames(), space.NumPdfs(), 0.0), 0, 0),
                  std::invalid_argument);
}

TEST_CASE("decoding picks the MAP sentence") {
  const SmallSetup s = MakeSetup();
  const HypothesisSpace &space = s.task.space;
  for (const Utterance &u : s.data.test) {
    const ScoreTable sc = ScoreFrames(s.ce, u.features);
    int32 best = -1;
    double best_score = -INFINITY;
    for (int32 i = 0; i < space.NumSentences(); ++i) {
      const double v = ForwardLogSum(space.SentenceGraph(i), sc);
      if (v > best_score) best_score = v, best = i;
    }
    CHECK(DecodeSentence(space, sc) == best);
    const UtteranceDecode d = DecodeUtterance(space, s.ce, u);
    CHECK(d.error == (best != u.ref_sentence));
    CHECK(d.true_loss >= 0.0);
  }
}

TEST_CASE("utterance objective gradient matches finite differences") {
  const SmallSetup s = MakeSetup();
  ObjectiveContext ctx;
  ctx.space = &s.task.space;
  ctx.utts = &s.data.train;
  ctx.lattices = &s.lattices;
  ctx.mode = DenominatorMode::kBaseline;
  ctx.check_theorem = false;
  const ScorerParams p = s.ce;
  const UtteranceResult r = EvaluateUtterance(ctx, p, 0, 1);
  const double h = 1e-6;
  for (int32 row = 0; row < p.NumPdfs(); row += 2) {
    for (int32 c = 0; c < p.FeatureDim(); ++c) {
      ScorerParams a = p, b = p;
      a.weight(row, c) += h;
      b.weight(row, c) -= h;
      const double fd = (EvaluateUtterance(ctx, a, 0, 1).loss_objective -
                         EvaluateUtterance(ctx, b, 0, 1).loss_objective) / (2 * h);
      CHECK(std::abs(r.grad.weight(row, c) - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("training") {
  const SmallSetup s = MakeSetup();
  TrainConfig tc;
  tc.iterations = 6;
  tc.batch_size = 4;
  SUBCASE("zero learning rate leaves the parameters unchanged") {
    tc.learning_rate = 0.0;
    const TrainResult r = Train(s.task.space, s.data.train, s.lattices, s.data.dev, s.ce, tc);
    CHECK(r.final_params == s.ce);
    CHECK(r.metrics.size() == 6);
    CHECK(r.theorem_ok);
  }
  SUBCASE("baseline and otf agree at the first iteration") {
    tc.mode = DenominatorMode::kBaseline;
    const TrainResult a = Train(s.task.space, s.data.train, s.lattices, s.data.dev, s.ce, tc);
    tc.mode = DenominatorMode::kOtf;
    const TrainResult b = Train(s.task.space, s.data.train, s.lattices, s.data.dev, s.ce, tc);
    CHECK(a.metrics[0].loss_objective == b.metrics[0].loss_objective);
    CHECK(a.metrics[0].loss_baseline == a.metrics[0].loss_otf);
  }
  SUBCASE("runs are deterministic") {
    tc.numerator = NumeratorMode::kAncestral;
    const TrainResult a = Train(s.task.space, s.data.train, s.lattices, s.data.dev, s.ce, tc);
    const TrainResult b = Train(s.task.space, s.data.train, s.lattices, s.data.dev, s.ce, tc);
    CHECK(a.final_params == b.final_params);
    CHECK(a.selected_iteration == b.selected_iteration);
    for (size_t i = 0; i < a.metrics.size(); ++i)
      CHECK(a.metrics[i].loss_objective == b.metrics[i].loss_objective);
  }
  SUBCASE("a single kept hypothesis gives zero loss") {
    const auto one = MakeLattices(s.task.space, s.data.train, s.ce, 1);
    tc.mode = DenominatorMode::kBaseline;
    const TrainResult r = Train(s.task.space, s.data.train, one, s.data.dev, s.ce, tc);
    CHECK(std::abs(r.metrics[0].loss_objective) <= 1e-12);
  }
  SUBCASE("bad configuration") {
    tc.K = 0;
    CHECK_THROWS_AS(tc.Check(), std::invalid_argument);
  }
}
