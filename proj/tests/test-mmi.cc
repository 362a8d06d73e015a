// tests/test-mmi.cc
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

#include <cmath>
#include <random>

#include "base/logging.h"
#include "doctest.h"
#include "lat/lattice-algorithms.h"
#include "mmi/mmi-objectives.h"
#include "test-util.h"
#include "verify/random-lattice.h"

using namespace latmmi;
using namespace latmmi::testing;

namespace {

// One frame; arcs (pdf, word, weight).
Lattice OneFrame(const std::vector<std::tuple<PdfId, WordId, double>> &arcs) {
  std::vector<Arc> a;
  for (auto [pdf, word, w] : arcs) a.push_back({0, 1, pdf, word, w});
  return Lattice(1, {0, 1}, 0, {1}, a);
}

double RowSum(const PdfMatrix &m, int32 t) {
  double s = 0.0;
  for (double v : m.Row(t)) s += v;
  return s;
}

}  // namespace

TEST_CASE("numerator mode names") {
  CHECK(ParseNumeratorMode("fixed") == NumeratorMode::kFixed);
  CHECK(ParseNumeratorMode("viterbi") == NumeratorMode::kViterbi);
  CHECK(ParseNumeratorMode("ancestral") == NumeratorMode::kAncestral);
  CHECK_THROWS_AS(ParseNumeratorMode("best"), std::invalid_argument);
  CHECK(std::string(NumeratorModeName(NumeratorMode::kAncestral)) == "ancestral");
}

TEST_CASE("true MMI with denominator equal to numerator is zero") {
  std::mt19937_64 rng(1);
  const Lattice lat = BinaryChain(4);
  const ScoreTable s = RandomScores(4, 2, 1.0, rng);
  const MmiEvaluation e = TrueMmi(lat, lat, s);
  CHECK(e.loss == 0.0);
  for (double g : e.grad.Data()) CHECK(g == 0.0);
}

TEST_CASE("true MMI with one competitor of equal score is ln 2") {
  const Lattice num = OneFrame({{1, 1, -1.0}});
  const Lattice den = OneFrame({{1, 1, -1.0}, {2, 2, -1.0}});
  const MmiEvaluation e = TrueMmi(num, den, Zeros(1, 2));
  CHECK(e.loss == doctest::Approx(0.693147180559945).epsilon(1e-14));
  CHECK(e.loss == e.denominator_logprob - e.numerator_logprob);
  CHECK(e.grad(0, 1) == doctest::Approx(-0.5));
  CHECK(e.grad(0, 2) == doctest::Approx(0.5));
}

TEST_CASE("true MMI matches enumeration on random instances") {
  std::mt19937_64 rng(2);
  RandomLatticeOptions o;
  o.max_frames = 8;
  o.num_words = 2;
  o.word_prob = 0.4;
  for (int i = 0; i < 30; ++i) {
    const Lattice den = RandomLattice(o, rng);
    const ScoreTable s = RandomScores(den.NumFrames(), o.num_pdfs, 1.0, rng);
    const auto paths = EnumeratePaths(den, s, 1e4);
    const WordSequence ref = paths.front().path.words;
    std::vector<Path> ref_paths;
    std::vector<double> num_scores, den_scores;
    for (const auto &p : paths) {
      den_scores.push_back(p.score);
      if (p.path.words == ref) {
        ref_paths.push_back(p.path);
        num_scores.push_back(p.score);
      }
    }
    const Lattice num = PathsToLattice(den.NumFrames(), ref_paths);
    const MmiEvaluation e = TrueMmi(num, den, s);
    const double oracle_loss = LogSumExp(den_scores) - LogSumExp(num_scores);
    CHECK(std::abs(e.loss - oracle_loss) <= 1e-9);
    CHECK(e.loss >= -1e-12);

    PdfMatrix oracle(den.NumFrames(), o.num_pdfs, 0.0);
    const double G = LogSumExp(den_scores), F = LogSumExp(num_scores);
    for (const auto &p : paths) {
      for (int32 t = 0; t < den.NumFrames(); ++t) {
        oracle(t, p.path.pdfs[t]) += std::exp(p.score - G);
        if (p.path.words == ref) oracle(t, p.path.pdfs[t]) -= std::exp(p.score - F);
      }
    }
    for (int32 t = 0; t < den.NumFrames(); ++t) {
      CHECK(std::abs(RowSum(e.grad, t)) <= 1e-9);
      for (PdfId q = 1; q <= o.num_pdfs; ++q)
        CHECK(std::abs(e.grad(t, q) - oracle(t, q)) <= 1e-9);
    }
  }
}

TEST_CASE("baseline lattice MMI closed forms") {
  SUBCASE("denominator holding only the numerator path") {
    const Lattice den = OneFrame({{1, 1, -0.7}});
    const Path p = MakePath(den, {0});
    const MmiEvaluation e = BaselineLatticeMmi(NumeratorSpec::Fixed(p), den, Zeros(1, 1), 0);
    CHECK(e.loss == 0.0);
  }
  SUBCASE("two retained alignments scoring -1 and -2") {
    const Lattice den = OneFrame({{1, 1, -1.0}, {2, 2, -2.0}});
    const Path p = MakePath(den, {0});
    const MmiEvaluation e = BaselineLatticeMmi(NumeratorSpec::Fixed(p), den, Zeros(1, 2), 0);
    CHECK(e.loss == doctest::Approx(0.313261687518223).epsilon(1e-13));
    CHECK(e.numerator_path->arc_ids == std::vector<int32>{0});
    const double post = 1.0 / (1.0 + std::exp(-1.0));
    CHECK(e.grad(0, 1) == doctest::Approx(post - 1.0));
    CHECK(e.grad(0, 2) == doctest::Approx(1.0 - post));
  }
}

TEST_CASE("baseline lattice MMI matches enumeration of the retained paths") {
  std::mt19937_64 rng(3);
  RandomLatticeOptions o;
  o.max_frames = 8;
  for (int i = 0; i < 30; ++i) {
    const Lattice raw = RandomLattice(o, rng);
    const ScoreTable ce = RandomScores(raw.NumFrames(), o.num_pdfs, 1.0, rng);
    const ScoreTable s = RandomScores(raw.NumFrames(), o.num_pdfs, 1.0, rng);
    const Lattice det = DeterminizeBestAlignment(raw, ce);
    const Path num = ViterbiBestPath(det, ce).path;
    const MmiEvaluation e = BaselineLatticeMmi(NumeratorSpec::Fixed(num), det, s, 0);
    std::vector<double> scores;
    for (const auto &p : EnumeratePaths(det, s, 1e4)) scores.push_back(p.score);
    CHECK(std::abs(e.loss - (LogSumExp(scores) - PathScore(num, s))) <= 1e-9);
    CHECK(e.loss >= -1e-12);
    for (int32 t = 0; t < raw.NumFrames(); ++t) CHECK(std::abs(RowSum(e.grad, t)) <= 1e-9);
  }
}

TEST_CASE("numerator spec consistency is enforced") {
  const Lattice den = OneFrame({{1, 1, 0.0}});
  NumeratorSpec bad;
  bad.mode = NumeratorMode::kFixed;
  CHECK_THROWS_AS(BaselineLatticeMmi(bad, den, Zeros(1, 1), 0), std::invalid_argument);
  bad.mode = NumeratorMode::kViterbi;
  CHECK_THROWS_AS(BaselineLatticeMmi(bad, den, Zeros(1, 1), 0), std::invalid_argument);
  bad.mode = NumeratorMode::kAncestral;
  CHECK_THROWS_AS(OtfMmi(bad, den, Zeros(1, 1), 0), std::invalid_argument);
}

TEST_CASE("otf MMI re-selects the best alignment per hypothesis") {
  // Hypothesis A (word 1): alignments -1 and -3; hypothesis B (word 2): -2.
  const Lattice raw = OneFrame({{1, 1, -1.0}, {2, 1, -3.0}, {3, 2, -2.0}});
  const Path num = MakePath(raw, {0});
  const MmiEvaluation e = OtfMmi(NumeratorSpec::Fixed(num), raw, Zeros(1, 3), 0);
  CHECK(e.loss == doctest::Approx(0.313261687518223).epsilon(1e-13));
  CHECK(e.grad(0, 2) == 0.0);
}

TEST_CASE("otf equals baseline when the raw lattice is already deterministic") {
  const Lattice raw = OneFrame({{1, 1, -1.0}, {3, 2, -2.0}});
  const NumeratorSpec num = NumeratorSpec::Fixed(MakePath(raw, {0}));
  std::mt19937_64 rng(4);
  const ScoreTable s = RandomScores(1, 3, 1.0, rng);
  const MmiEvaluation a = OtfMmi(num, raw, s, 0);
  const MmiEvaluation b = BaselineLatticeMmi(num, raw, s, 0);
  CHECK(a.loss == b.loss);
  CHECK(a.grad == b.grad);
}

TEST_CASE("otf denominator dominates any fixed determinization") {
  std::mt19937_64 rng(5);
  RandomLatticeOptions o;
  o.max_frames = 9;
  for (int i = 0; i < 50; ++i) {
    const Lattice raw = RandomLattice(o, rng);
    const ScoreTable ref = RandomScores(raw.NumFrames(), o.num_pdfs, 1.0, rng);
    const ScoreTable s = RandomScores(raw.NumFrames(), o.num_pdfs, 1.0, rng);
    const double otf = ForwardLogSum(DeterminizeBestAlignment(raw, s), s);
    const double fixed = ForwardLogSum(DeterminizeBestAlignment(raw, ref), s);
    CHECK(otf >= fixed - 1e-12);
  }
}

TEST_CASE("resolve numerator") {
  const Lattice lat = TwoParallelArcs(-1.0, -1.0, 1, 2, 1, 1);
  const ScoreTable s = Zeros(1, 2);
  SUBCASE("fixed returns the stored path") {
    const Path p = MakePath(lat, {1});
    CHECK(ResolveNumerator(NumeratorSpec::Fixed(p), s, 0) == p);
  }
  SUBCASE("viterbi on a single-path lattice") {
    auto chain = std::make_shared<const Lattice>(TwoFrameChain());
    const Path p = ResolveNumerator(NumeratorSpec::Sampled(NumeratorMode::kViterbi, chain),
                                    Zeros(2, 2), 0);
    CHECK(p.arc_ids == std::vector<int32>{0, 1});
  }
  SUBCASE("ancestral draws are balanced over two equal paths") {
    auto shared = std::make_shared<const Lattice>(lat);
    const NumeratorSpec spec = NumeratorSpec::Sampled(NumeratorMode::kAncestral, shared);
    int first = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) first += ResolveNumerator(spec, s, 1000 + i).arc_ids[0] == 0;
    CHECK(std::abs(double(first) / n - 0.5) <= 0.01);
  }
}

TEST_CASE("true MMI warns but does not fail when the numerator is not covered") {
  const Lattice num = OneFrame({{1, 1, 0.0}});
  const Lattice den = OneFrame({{2, 2, -5.0}});
  SetWarningsEnabled(false);
  const MmiEvaluation e = TrueMmi(num, den, Zeros(1, 2));
  SetWarningsEnabled(true);
  CHECK(e.loss < 0.0);
}
