// tests/test-util.h
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

#ifndef LATMMI_TESTS_TEST_UTIL_H_
#define LATMMI_TESTS_TEST_UTIL_H_

#include <cmath>
#include <vector>

#include "lat/lattice.h"

namespace latmmi::testing {

// Two-frame lattice 0 -> 1 -> 2 with one arc per frame.
inline Lattice TwoFrameChain(double w0 = -1.0, double w1 = -0.5) {
  return Lattice(2, {0, 1, 2}, 0, {2},
                 {{0, 1, 1, 0, w0}, {1, 2, 2, 7, w1}});
}

// One frame, two parallel arcs with the given pdfs, words and weights.
inline Lattice TwoParallelArcs(double w0, double w1, PdfId p0 = 1, PdfId p1 = 2,
                               WordId word0 = 1, WordId word1 = 2) {
  return Lattice(1, {0, 1}, 0, {1}, {{0, 1, p0, word0, w0}, {0, 1, p1, word1, w1}});
}

// Chain of k frames with two parallel arcs each: 2^k paths.
inline Lattice BinaryChain(int32 k) {
  std::vector<int32> frames;
  std::vector<Arc> arcs;
  for (int32 t = 0; t <= k; ++t) frames.push_back(t);
  for (int32 t = 0; t < k; ++t) {
    arcs.push_back({t, t + 1, 1, 0, -0.1 * t});
    arcs.push_back({t, t + 1, 2, 0, -0.2 * t});
  }
  return Lattice(k, frames, 0, {k}, arcs);
}

inline ScoreTable Zeros(int32 T, int32 P) { return ScoreTable(T, P, 0.0); }

}  // namespace latmmi::testing

#endif  // LATMMI_TESTS_TEST_UTIL_H_
