// src/parallel/kernels.h
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

#ifndef LATMMI_PARALLEL_KERNELS_H_
#define LATMMI_PARALLEL_KERNELS_H_

#include <vector>

#include "lat/lattice-algorithms.h"
#include "toy/scorer.h"

namespace latmmi {

// OpenMP versions of the data-parallel inner loops.  Each one splits work so
// that every output element is computed by exactly the same sequence of
// floating-point operations as its serial reference (ForwardScores,
// BackwardFill, ScoreFrames, ScorerBackward), so results are bit-identical
// for any thread count.

int32 MaxThreads();

/// States of one frame in parallel; frames in order.
std::vector<double> ForwardScoresParallel(const Lattice &lattice,
                                          const ScoreTable &scores);
BackwardTable BackwardFillParallel(const Lattice &lattice,
                                   const ScoreTable &scores);

/// Frames in parallel.
ScoreTable ScoreFramesParallel(const ScorerParams &params,
                               const FeatureMatrix &features);
/// Pdf rows of the parameter gradient in parallel.
ScorerParams ScorerBackwardParallel(const ScorerParams &params,
                                    const FeatureMatrix &features,
                                    const ScoreTable &scores,
                                    const PdfMatrix &grad_scores);

}  // namespace latmmi

#endif  // LATMMI_PARALLEL_KERNELS_H_
