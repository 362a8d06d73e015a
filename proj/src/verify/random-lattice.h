// src/verify/random-lattice.h
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

#ifndef LATMMI_VERIFY_RANDOM_LATTICE_H_
#define LATMMI_VERIFY_RANDOM_LATTICE_H_

#include <random>

#include "lat/lattice.h"

namespace latmmi {

struct RandomLatticeOptions {
  int32 min_frames = 1;
  int32 max_frames = 12;
  int32 max_states_per_frame = 3;
  int32 max_out_arcs = 4;
  int32 num_pdfs = 5;
  int32 num_words = 3;
  double word_prob = 0.3;      // chance that an arc carries a word label
  double weight_scale = 1.0;   // std-dev of graph weights
  double min_paths = 1.0;
  double max_paths = 1e4;
};

/// A valid frame-synchronous lattice: every state of frame t < T has between
/// 1 and max_out_arcs arcs to frame t + 1, every state has an incoming arc,
/// and every state of frame T is final.  Draws until the path count lies in
/// [min_paths, max_paths].
Lattice RandomLattice(const RandomLatticeOptions &opts, std::mt19937_64 &rng);

/// Standard-normal scores times `scale`, T x num_pdfs.
ScoreTable RandomScores(int32 num_frames, int32 num_pdfs, double scale,
                        std::mt19937_64 &rng);

}  // namespace latmmi

#endif  // LATMMI_VERIFY_RANDOM_LATTICE_H_
