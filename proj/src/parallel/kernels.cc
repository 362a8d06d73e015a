// src/parallel/kernels.cc
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

#include "parallel/kernels.h"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace latmmi {

int32 MaxThreads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::vector<double> ForwardScoresParallel(const Lattice &lattice,
                                          const ScoreTable &scores) {
  CheckCompatible(lattice, scores, "ForwardScoresParallel");
  std::vector<double> alpha(lattice.NumStates(), kLogZero);
  alpha[lattice.Start()] = 0.0;
  for (int32 t = 1; t <= lattice.NumFrames(); ++t) {
    auto states = lattice.StatesAtFrame(t);
    const int64 n = static_cast<int64>(states.size());
#pragma omp parallel for schedule(static) if (n > 64)
    for (int64 i = 0; i < n; ++i) {
      const StateId s = states[i];
      double acc = kLogZero;
      for (int32 a : lattice.InArcs(s)) {
        const Arc &arc = lattice.GetArc(a);
        acc = LogAdd(acc, alpha[arc.src] + (scores(t - 1, arc.pdf) +
                                            arc.graph_weight));
      }
      alpha[s] = acc;
    }
  }
  return alpha;
}

BackwardTable BackwardFillParallel(const Lattice &lattice,
                                   const ScoreTable &scores) {
  CheckCompatible(lattice, scores, "BackwardFillParallel");
  BackwardTable table;
  table.beta.assign(lattice.NumStates(), kLogZero);
  for (StateId f : lattice.Finals()) table.beta[f] = 0.0;
  for (int32 t = lattice.NumFrames() - 1; t >= 0; --t) {
    auto states = lattice.StatesAtFrame(t);
    const int64 n = static_cast<int64>(states.size());
#pragma omp parallel for schedule(static) if (n > 64)
    for (int64 i = 0; i < n; ++i) {
      const StateId s = states[i];
      double acc = kLogZero;
      for (int32 a : lattice.OutArcs(s)) {
        const Arc &arc = lattice.GetArc(a);
        acc = LogAdd(acc, (scores(t, arc.pdf) + arc.graph_weight) +
                              table.beta[arc.dst]);
      }
      table.beta[s] = acc;
    }
  }
  return table;
}

ScoreTable ScoreFramesParallel(const ScorerParams &params,
                               const FeatureMatrix &features) {
  internal::CheckDims(params, features);
  const int32 num_frames = static_cast<int32>(features.rows());
  ScoreTable scores(num_frames, params.NumPdfs());
#pragma omp parallel for schedule(static)
  for (int32 t = 0; t < num_frames; ++t)
    internal::ScoreFrameRow(params, features, t, scores.Row(t));
  return scores;
}

ScorerParams ScorerBackwardParallel(const ScorerParams &params,
                                    const FeatureMatrix &features,
                                    const ScoreTable &scores,
                                    const PdfMatrix &grad_scores) {
  internal::CheckDims(params, features);
  ScorerParams grad = ScorerParams::Zero(params.NumPdfs(), params.FeatureDim());
  const std::vector<double> sums = internal::GradRowSums(grad_scores);
#pragma omp parallel for schedule(static)
  for (PdfId pdf = 1; pdf <= params.NumPdfs(); ++pdf)
    internal::BackwardPdfRow(features, scores, grad_scores, sums, pdf, &grad);
  return grad;
}

}  // namespace latmmi
