// tests/test-lattice-core.cc
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

#include <random>

#include "base/text-utils.h"
#include "doctest.h"
#include "lat/lattice-algorithms.h"
#include "lat/lattice-io.h"
#include "lat/lattice.h"
#include "test-util.h"
#include "verify/random-lattice.h"

using namespace latmmi;
using namespace latmmi::testing;

TEST_CASE("validate accepts a well-formed two-frame chain") {
  CHECK(Validate(TwoFrameChain()).empty());
  CHECK(TwoFrameChain().IsValid());
}

TEST_CASE("validate reports an arc that skips a frame") {
  Lattice lat(2, {0, 2}, 0, {1}, {{0, 1, 1, 0, 0.0}});
  const auto v = Validate(lat);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == Violation::Kind::kFrameStep);
  CHECK(v[0].id == 0);
  CHECK(std::string(ViolationKindName(v[0].kind)) == "frame-step");
}

TEST_CASE("validate reports an unreachable state") {
  // State 3 at frame 1 has no incoming arc.
  Lattice lat(2, {0, 1, 2, 1}, 0, {2}, {{0, 1, 1, 0, 0.0}, {1, 2, 1, 0, 0.0}, {3, 2, 1, 0, 0.0}});
  const auto v = Validate(lat);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == Violation::Kind::kConnectivity);
  CHECK(v[0].id == 3);
}

TEST_CASE("validate catches structural errors") {
  SUBCASE("final state not at the last frame") {
    Lattice lat(2, {0, 1, 2}, 0, {1}, {{0, 1, 1, 0, 0.0}, {1, 2, 1, 0, 0.0}});
    CHECK_FALSE(lat.IsValid());
  }
  SUBCASE("start not at frame 0") {
    Lattice lat(1, {1, 0}, 0, {0}, {{1, 0, 1, 0, 0.0}});
    CHECK_FALSE(lat.IsValid());
  }
  SUBCASE("non-finite weight") {
    Lattice lat(1, {0, 1}, 0, {1}, {{0, 1, 1, 0, std::nan("")}});
    CHECK_FALSE(lat.IsValid());
  }
  SUBCASE("pdf id zero") {
    Lattice lat(1, {0, 1}, 0, {1}, {{0, 1, 0, 0, 0.0}});
    CHECK_FALSE(lat.IsValid());
  }
  SUBCASE("arc to a missing state") {
    Lattice lat(1, {0, 1}, 0, {1}, {{0, 1, 1, 0, 0.0}, {0, 5, 1, 0, 0.0}});
    CHECK_FALSE(lat.IsValid());
    CHECK_THROWS_AS(lat.RequireValid("test"), std::invalid_argument);
  }
}

TEST_CASE("path score of a two-frame path") {
  const Lattice lat = TwoFrameChain(-1.0, -0.5);
  const Path p = MakePath(lat, {0, 1});
  ScoreTable s(2, 2, 0.0);
  s(0, 1) = -2.0;
  s(1, 2) = -1.5;
  CHECK(PathScore(p, s) == -5.0);
  CHECK(p.words == WordSequence{7});
  CHECK(p.pdfs == std::vector<PdfId>{1, 2});
  CHECK(p.graph_weight == -1.5);
}

TEST_CASE("path score with all-zero scores and weights is zero") {
  const Lattice lat = TwoFrameChain(0.0, 0.0);
  CHECK(PathScore(MakePath(lat, {0, 1}), Zeros(2, 2)) == 0.0);
}

TEST_CASE("path score rejects mismatched tables") {
  const Path p = MakePath(TwoFrameChain(), {0, 1});
  CHECK_THROWS_AS(PathScore(p, Zeros(3, 2)), std::invalid_argument);
  CHECK_THROWS_AS(PathScore(p, Zeros(2, 1)), std::invalid_argument);
}

TEST_CASE("make path rejects broken arc sequences") {
  const Lattice lat = BinaryChain(3);
  CHECK_THROWS_AS(MakePath(lat, {0, 2}), std::invalid_argument);
  CHECK_THROWS_AS(MakePath(lat, {0, 3, 0}), std::invalid_argument);
  CHECK_NOTHROW(MakePath(lat, {0, 3, 4}));
}

TEST_CASE("random paths: score matches term-by-term sum and splits additively") {
  std::mt19937_64 rng(99);
  RandomLatticeOptions o;
  o.min_frames = 10;
  o.max_frames = 10;
  for (int i = 0; i < 20; ++i) {
    const Lattice lat = RandomLattice(o, rng);
    const ScoreTable s = RandomScores(lat.NumFrames(), o.num_pdfs, 2.0, rng);
    for (const ScoredPath &sp : EnumeratePaths(lat, s, 1e4)) {
      const Path &p = sp.path;
      // Path invariants.
      REQUIRE(p.NumFrames() == lat.NumFrames());
      CHECK(p.arcs.front().src == lat.Start());
      CHECK(lat.IsFinal(p.arcs.back().dst));
      WordSequence words;
      for (int32 t = 0; t < p.NumFrames(); ++t) {
        if (t > 0) CHECK(p.arcs[t - 1].dst == p.arcs[t].src);
        CHECK(p.pdfs[t] == p.arcs[t].pdf);
        if (p.arcs[t].word != kEpsilon) words.push_back(p.arcs[t].word);
      }
      CHECK(words == p.words);

      double manual = 0.0;
      for (int32 t = 0; t < p.NumFrames(); ++t)
        manual += s(t, p.arcs[t].pdf) + p.arcs[t].graph_weight;
      CHECK(manual == sp.score);
      const int32 cut = static_cast<int32>(rng() % (p.NumFrames() + 1));
      const double split = PathScoreRange(p, s, 0, cut) +
                           PathScoreRange(p, s, cut, p.NumFrames());
      CHECK(std::abs(split - sp.score) <= 1e-12);
    }
  }
}

TEST_CASE("lattice text format round-trips") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 30; ++i) {
    RandomLatticeOptions o;
    o.weight_scale = 3.0;
    const Lattice lat = RandomLattice(o, rng);
    const std::string text = LatticeToString(lat);
    const Lattice back = ReadLatticeFromString(text);
    CHECK(back == lat);
    CHECK(LatticeToString(back) == text);
  }
}

TEST_CASE("lattice reader accepts comments and any state order") {
  const std::string text =
      "LATTICE v1   # header\n"
      "frames 1\n"
      "state 1 1\n"
      "state 0 0\n"
      "\n"
      "start 0\n"
      "final 1\n"
      "arc 0 1 3 2 -0.25\n";
  const Lattice lat = ReadLatticeFromString(text);
  CHECK(lat.NumStates() == 2);
  CHECK(lat.GetArc(0).pdf == 3);
  CHECK(lat.GetArc(0).word == 2);
  CHECK(lat.GetArc(0).graph_weight == -0.25);
}

TEST_CASE("lattice reader rejects invalid files with line numbers") {
  auto error_of = [](const std::string &text) {
    try {
      ReadLatticeFromString(text);
    } catch (const ParseError &e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(error_of("LATTICE v2\n").rfind("line 1:", 0) == 0);
  CHECK(error_of("LATTICE v1\nframes x\n").rfind("line 2:", 0) == 0);
  // Arc skipping a frame: reported on the arc line.
  const std::string skip =
      "LATTICE v1\nframes 2\nstate 0 0\nstate 1 1\nstate 2 2\nstart 0\nfinal 2\n"
      "arc 0 1 1 0 0\narc 1 2 1 0 0\narc 0 2 1 0 0\n";
  const std::string msg = error_of(skip);
  CHECK(msg.rfind("line 10:", 0) == 0);
  CHECK(msg.find("frame-step") != std::string::npos);
  CHECK(error_of("LATTICE v1\nframes 1\nstate 0 0\nstate 2 1\nstart 0\nfinal 2\n")
            .rfind("line", 0) == 0);
  CHECK(error_of("LATTICE v1\nframes 1\nstate 0 0\nstate 1 1\nstart 0\nfinal 1\narc 0 1 1 0 inf\n")
            .rfind("line 7:", 0) == 0);
}
