// src/toy/scorer.h
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

#ifndef LATMMI_TOY_SCORER_H_
#define LATMMI_TOY_SCORER_H_

#include <Eigen/Dense>

#include "lat/lattice.h"

namespace latmmi {

/// Per-frame features, one row per frame (T x F).
using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                    Eigen::RowMajor>;

/// Affine map followed by log-softmax over pdfs:
///   a(t, p) = z_p - log sum_q exp(z_q),  z = weight * x_t + bias.
/// Row p - 1 of `weight` / entry p - 1 of `bias` belong to pdf p.
struct ScorerParams {
  Eigen::MatrixXd weight;  // P x F
  Eigen::VectorXd bias;    // P

  static ScorerParams Zero(int32 num_pdfs, int32 feature_dim);
  static ScorerParams Random(int32 num_pdfs, int32 feature_dim, double scale,
                             uint64 seed);

  int32 NumPdfs() const { return static_cast<int32>(weight.rows()); }
  int32 FeatureDim() const { return static_cast<int32>(weight.cols()); }
  bool AllFinite() const { return weight.allFinite() && bias.allFinite(); }

  /// this += scale * other
  void AddScaled(const ScorerParams &other, double scale);
  bool operator==(const ScorerParams &o) const {
    return weight == o.weight && bias == o.bias;
  }
};

/// Serial reference: frames in order.
ScoreTable ScoreFrames(const ScorerParams &params, const FeatureMatrix &features);

/// Chain rule from d loss / d a(t, p) to d loss / d params.  `scores` must
/// be ScoreFrames(params, features).
ScorerParams ScorerBackward(const ScorerParams &params,
                            const FeatureMatrix &features,
                            const ScoreTable &scores,
                            const PdfMatrix &grad_scores);

namespace internal {
// Shared row kernels, so serial and parallel drivers agree bit for bit.
void ScoreFrameRow(const ScorerParams &params, const FeatureMatrix &features,
                   int32 t, std::span<double> out);
void BackwardPdfRow(const FeatureMatrix &features, const ScoreTable &scores,
                    const PdfMatrix &grad_scores,
                    const std::vector<double> &grad_sums, int32 pdf,
                    ScorerParams *grad);
std::vector<double> GradRowSums(const PdfMatrix &grad_scores);
void CheckDims(const ScorerParams &params, const FeatureMatrix &features);
}  // namespace internal

}  // namespace latmmi

#endif  // LATMMI_TOY_SCORER_H_
