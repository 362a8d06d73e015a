// src/verify/random-lattice.cc
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

#include "verify/random-lattice.h"

#include <stdexcept>

#include "lat/lattice-algorithms.h"

namespace latmmi {

namespace {

Lattice DrawOnce(const RandomLatticeOptions &o, std::mt19937_64 &rng) {
  auto uniform = [&rng](int32 lo, int32 hi) {
    return std::uniform_int_distribution<int32>(lo, hi)(rng);
  };
  std::bernoulli_distribution has_word(o.word_prob);
  std::normal_distribution<double> weight(0.0, o.weight_scale);

  const int32 T = uniform(o.min_frames, o.max_frames);
  std::vector<int32> frames{0};
  std::vector<std::vector<StateId>> at(T + 1);
  at[0] = {0};
  std::vector<Arc> arcs;
  for (int32 t = 0; t < T; ++t) {
    const int32 n = uniform(1, o.max_states_per_frame);
    for (int32 i = 0; i < n; ++i) {
      at[t + 1].push_back(static_cast<StateId>(frames.size()));
      frames.push_back(t + 1);
    }
    std::vector<int32> out(at[t].size(), 0);
    auto add = [&](size_t from, StateId dst) {
      Arc a;
      a.src = at[t][from];
      a.dst = dst;
      a.pdf = uniform(1, o.num_pdfs);
      a.word = has_word(rng) ? uniform(1, o.num_words) : kEpsilon;
      a.graph_weight = weight(rng);
      arcs.push_back(a);
      ++out[from];
    };
    // Every next-frame state gets an incoming arc, every current state an
    // outgoing one; then some extra arcs.
    for (StateId dst : at[t + 1]) {
      size_t from = uniform(0, static_cast<int32>(at[t].size()) - 1);
      for (size_t k = 0; k < at[t].size() && out[from] >= o.max_out_arcs; ++k)
        from = (from + 1) % at[t].size();
      if (out[from] >= o.max_out_arcs) return Lattice();
      add(from, dst);
    }
    for (size_t i = 0; i < at[t].size(); ++i) {
      if (out[i] == 0) add(i, at[t + 1][uniform(0, n - 1)]);
      const int32 extra = uniform(0, o.max_out_arcs - out[i]);
      for (int32 k = 0; k < extra; ++k) add(i, at[t + 1][uniform(0, n - 1)]);
    }
  }
  return Lattice(T, std::move(frames), 0, at[T], std::move(arcs));
}

}  // namespace

Lattice RandomLattice(const RandomLatticeOptions &opts, std::mt19937_64 &rng) {
  if (opts.min_frames < 1 || opts.max_frames < opts.min_frames ||
      opts.max_out_arcs < 1 || opts.max_states_per_frame < 1 || opts.num_pdfs < 1)
    throw std::invalid_argument("RandomLattice: bad options");
  for (int attempt = 0; attempt < 100000; ++attempt) {
    Lattice lat = DrawOnce(opts, rng);
    if (lat.NumFrames() == 0 || !lat.IsValid()) continue;
    const double n = CountPaths(lat);
    if (n >= opts.min_paths && n <= opts.max_paths) return lat;
  }
  throw std::runtime_error("RandomLattice: no lattice within the path bounds");
}

ScoreTable RandomScores(int32 num_frames, int32 num_pdfs, double scale,
                        std::mt19937_64 &rng) {
  std::normal_distribution<double> normal(0.0, scale);
  ScoreTable s(num_frames, num_pdfs, 0.0);
  for (int32 t = 0; t < num_frames; ++t)
    for (PdfId p = 1; p <= num_pdfs; ++p) s(t, p) = normal(rng);
  return s;
}

}  // namespace latmmi
