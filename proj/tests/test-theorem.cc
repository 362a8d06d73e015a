// tests/test-theorem.cc
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
#include <map>
#include <random>

#include "doctest.h"
#include "lat/lattice-algorithms.h"
#include "mmi/mmi-objectives.h"
#include "mmi/theorem-harness.h"
#include "test-util.h"
#include "verify/random-lattice.h"

using namespace latmmi;
using namespace latmmi::testing;

namespace {

Lattice OneFrame(const std::vector<std::tuple<PdfId, WordId, double>> &arcs) {
  std::vector<Arc> a;
  for (auto [pdf, word, w] : arcs) a.push_back({0, 1, pdf, word, w});
  return Lattice(1, {0, 1}, 0, {1}, a);
}

struct RandomInstance {
  Lattice graph;
  ScoreTable scores;
  WordSequence ref;
  Path fixed;
};

RandomInstance MakeInstance(std::mt19937_64 &rng) {
  RandomLatticeOptions o;
  o.max_frames = 8;
  o.num_words = 3;
  o.word_prob = 0.35;
  RandomInstance r;
  r.graph = RandomLattice(o, rng);
  r.scores = RandomScores(r.graph.NumFrames(), o.num_pdfs, 1.0, rng);
  const auto paths = EnumeratePaths(r.graph, r.scores, 1e5);
  std::uniform_int_distribution<size_t> pick(0, paths.size() - 1);
  r.fixed = paths[pick(rng)].path;
  r.ref = r.fixed.words;
  return r;
}

}  // namespace

TEST_CASE("measure m") {
  SUBCASE("single-path graph") {
    const Lattice g = TwoFrameChain();
    CHECK(MeasureM(MakePath(g, {0, 1}), g, Zeros(2, 2)) == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("two equal paths") {
    const Lattice g = TwoParallelArcs(-0.3, -0.3);
    CHECK(MeasureM(MakePath(g, {0}), g, Zeros(1, 2)) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(MeasureM(MakePath(g, {1}), g, Zeros(1, 2)) == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("path outside the graph is rejected") {
    const Lattice g = TwoParallelArcs(-0.3, -0.3);
    const Lattice other = TwoParallelArcs(0.0, 0.0, 3, 4);
    CHECK_THROWS_AS(MeasureM(MakePath(other, {0}), g, Zeros(1, 4)), std::invalid_argument);
  }
  SUBCASE("random graphs match normalized enumeration") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 30; ++i) {
      const RandomInstance inst = MakeInstance(rng);
      const auto paths = EnumeratePaths(inst.graph, inst.scores, 1e5);
      std::vector<double> s;
      for (const auto &p : paths) s.push_back(p.score);
      const double z = LogSumExp(s);
      for (size_t k = 0; k < std::min<size_t>(paths.size(), 5); ++k)
        CHECK(std::abs(MeasureM(paths[k].path, inst.graph, inst.scores) -
                       std::exp(paths[k].score - z)) <= 1e-12);
    }
  }
}

TEST_CASE("normalization residual") {
  CHECK(CheckNormalization(TwoFrameChain(), Zeros(2, 2)) <= 1e-15);
  std::mt19937_64 rng(12);
  for (int i = 0; i < 100; ++i) {
    const RandomInstance inst = MakeInstance(rng);
    CHECK(CheckNormalization(inst.graph, inst.scores) <= 1e-9);
  }
}

TEST_CASE("grouping") {
  SUBCASE("two hypotheses with one alignment each") {
    const Lattice g = TwoParallelArcs(-1.0, -2.0);
    const HypothesisGrouping gr = BuildGrouping(g, Zeros(1, 2), {1}, MakePath(g, {0}));
    CHECK(gr.reference_set.size() == 1);
    CHECK(gr.competitor_sets.size() == 1);
    CHECK(gr.selected_competitors.at({2}).path.arc_ids == std::vector<int32>{1});
  }
  SUBCASE("best alignment of a hypothesis is picked") {
    const Lattice g = OneFrame({{1, 1, std::log(0.3)}, {2, 1, std::log(0.1)}, {3, 2, std::log(0.6)}});
    const HypothesisGrouping gr = BuildGrouping(g, Zeros(1, 3), {2}, MakePath(g, {2}));
    CHECK(gr.selected_competitors.at({1}).path.arc_ids == std::vector<int32>{0});
    CHECK(std::exp(gr.LogM(gr.selected_competitors.at({1}))) == doctest::Approx(0.3));
  }
  SUBCASE("reference path with other words is rejected") {
    const Lattice g = TwoParallelArcs(-1.0, -2.0);
    CHECK_THROWS_AS(BuildGrouping(g, Zeros(1, 2), {1}, MakePath(g, {1})), std::invalid_argument);
  }
  SUBCASE("random graphs match a brute-force per-group argmax") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 30; ++i) {
      const RandomInstance inst = MakeInstance(rng);
      const HypothesisGrouping gr = BuildGrouping(inst.graph, inst.scores, inst.ref, inst.fixed);
      std::map<WordSequence, double> best;
      for (const auto &p : EnumeratePaths(inst.graph, inst.scores, 1e5)) {
        auto it = best.find(p.path.words);
        if (it == best.end() || p.score > it->second) best[p.path.words] = p.score;
      }
      CHECK(gr.reference_best.score == best.at(inst.ref));
      for (const auto &[w, sel] : gr.selected_competitors) CHECK(sel.score == best.at(w));
      CHECK(gr.selected_competitors.size() + 1 == best.size());
    }
  }
}

TEST_CASE("group mass bound") {
  SUBCASE("singletons and equal pairs give zero residual") {
    const Lattice g = OneFrame({{1, 1, -0.4}, {2, 1, -0.4}, {3, 2, -1.0}});
    const HypothesisGrouping gr = BuildGrouping(g, Zeros(1, 3), {1}, MakePath(g, {0}));
    const auto res = CheckGroupBound(gr);
    CHECK(std::abs(res.at({1})) <= 1e-15);
    CHECK(std::abs(res.at({2})) <= 1e-15);
  }
  SUBCASE("random graphs") {
    std::mt19937_64 rng(14);
    for (int i = 0; i < 100; ++i) {
      const RandomInstance inst = MakeInstance(rng);
      const HypothesisGrouping gr = BuildGrouping(inst.graph, inst.scores, inst.ref, inst.fixed);
      for (const auto &[w, r] : CheckGroupBound(gr)) CHECK(r >= -1e-9);
    }
  }
}

TEST_CASE("reference mass bound") {
  SUBCASE("singleton reference set") {
    const Lattice g = TwoParallelArcs(-1.0, -2.0);
    const HypothesisGrouping gr = BuildGrouping(g, Zeros(1, 2), {1}, MakePath(g, {0}));
    CHECK(std::abs(CheckReferenceBound(gr)) <= 1e-15);
  }
  SUBCASE("extra reference alignments give a positive residual") {
    const Lattice g = OneFrame({{1, 1, -1.0}, {2, 1, -3.0}, {3, 2, -2.0}});
    const HypothesisGrouping gr = BuildGrouping(g, Zeros(1, 3), {1}, MakePath(g, {0}));
    CHECK(CheckReferenceBound(gr) > 0.0);
  }
  SUBCASE("a reference path carrying inflated weights violates it") {
    const Lattice g = TwoParallelArcs(-1.0, -2.0);
    const Lattice bad = TwoParallelArcs(9.0, -2.0);
    const HypothesisGrouping gr = BuildGrouping(g, Zeros(1, 2), {1}, MakePath(bad, {0}));
    CHECK(CheckReferenceBound(gr) < -1e-9);
  }
}

TEST_CASE("muhat") {
  SUBCASE("only hypothesis, unique alignment") {
    const Lattice g = OneFrame({{1, 1, -0.5}});
    const HypothesisGrouping gr = BuildGrouping(g, Zeros(1, 1), {1}, MakePath(g, {0}));
    CHECK(MuHatOfA(gr, {}, true) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(-std::log(MuHatOfA(gr, {}, true)) == doctest::Approx(0.0));
  }
  SUBCASE("one competitor") {
    const Lattice g = TwoParallelArcs(-1.0, -2.0);
    const HypothesisGrouping gr = BuildGrouping(g, Zeros(1, 2), {1}, MakePath(g, {0}));
    const double mu = MuHatOfA(gr, {}, true);
    CHECK(mu == doctest::Approx(std::exp(-1.0) / (std::exp(-1.0) + std::exp(-2.0))));
    CHECK(-std::log(mu) == doctest::Approx(0.313261687518223).epsilon(1e-13));
    CHECK(MuHatOfA(gr, {}, false) == doctest::Approx(mu));
  }
  SUBCASE("the two readings differ when the reference is not its own best") {
    const Lattice g = OneFrame({{1, 1, -2.0}, {2, 1, -1.0}, {3, 2, -1.5}});
    const HypothesisGrouping gr = BuildGrouping(g, Zeros(1, 3), {1}, MakePath(g, {0}));
    CHECK(MuHatOfA(gr, {}, true) < MuHatOfA(gr, {}, false));
  }
  SUBCASE("restricting to an absent hypothesis set is rejected") {
    const Lattice g = TwoParallelArcs(-1.0, -2.0);
    const HypothesisGrouping gr = BuildGrouping(g, Zeros(1, 2), {1}, MakePath(g, {0}));
    CHECK_THROWS_AS(MuHatOfA(gr, {{5}}, true), std::invalid_argument);
  }
  SUBCASE("negative log equals the otf loss on random instances") {
    std::mt19937_64 rng(15);
    for (int i = 0; i < 50; ++i) {
      const RandomInstance inst = MakeInstance(rng);
      const HypothesisGrouping gr = BuildGrouping(inst.graph, inst.scores, inst.ref, inst.fixed);
      const double otf =
          OtfMmi(NumeratorSpec::Fixed(inst.fixed), inst.graph, inst.scores, 0).loss;
      CHECK(std::abs(-std::log(MuHatOfA(gr, {}, true)) - otf) <= 1e-9);
    }
  }
}

TEST_CASE("full report") {
  std::mt19937_64 rng(16);
  for (int i = 0; i < 20; ++i) {
    const RandomInstance inst = MakeInstance(rng);
    const double otf = OtfMmi(NumeratorSpec::Fixed(inst.fixed), inst.graph, inst.scores, 0).loss;
    const Lattice det = DeterminizeBestAlignment(inst.graph, inst.scores);
    TheoremCheckInput in;
    in.full_graph = &inst.graph;
    in.scores = &inst.scores;
    in.ref_words = inst.ref;
    in.fixed_ref_path = &inst.fixed;
    in.otf_loss = otf;
    in.determinized = &det;
    const MeasureReport r = RunTheoremChecks(in);
    CHECK(r.AllOk());
    CHECK(r.muhat_loss_gap.has_value());
    CHECK(*r.selection_score_gap <= 1e-12);
    CHECK(r.mu_reference >= r.m_selected_reference - 1e-12);
  }
  TheoremCheckInput empty;
  CHECK_THROWS_AS(RunTheoremChecks(empty), std::invalid_argument);
}
