// src/toy/scorer.cc
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

#include "toy/scorer.h"

#include <random>
#include <stdexcept>

namespace latmmi {

ScorerParams ScorerParams::Zero(int32 num_pdfs, int32 feature_dim) {
  ScorerParams p;
  p.weight = Eigen::MatrixXd::Zero(num_pdfs, feature_dim);
  p.bias = Eigen::VectorXd::Zero(num_pdfs);
  return p;
}

ScorerParams ScorerParams::Random(int32 num_pdfs, int32 feature_dim,
                                  double scale, uint64 seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  ScorerParams p = Zero(num_pdfs, feature_dim);
  for (int32 r = 0; r < num_pdfs; ++r)
    for (int32 c = 0; c < feature_dim; ++c) p.weight(r, c) = normal(rng);
  return p;
}

void ScorerParams::AddScaled(const ScorerParams &other, double scale) {
  weight += scale * other.weight;
  bias += scale * other.bias;
}

namespace internal {

void CheckDims(const ScorerParams &params, const FeatureMatrix &features) {
  if (features.cols() != params.FeatureDim())
    throw std::invalid_argument(
        "scorer: feature dimension " + std::to_string(features.cols()) +
        " does not match parameters (" + std::to_string(params.FeatureDim()) +
        ")");
  if (params.bias.size() != params.weight.rows())
    throw std::invalid_argument("scorer: bias/weight size mismatch");
}

void ScoreFrameRow(const ScorerParams &params, const FeatureMatrix &features,
                   int32 t, std::span<double> out) {
  const int32 num_pdfs = params.NumPdfs();
  double max = kLogZero;
  for (int32 p = 0; p < num_pdfs; ++p) {
    double z = params.bias(p);
    for (int32 f = 0; f < params.FeatureDim(); ++f)
      z += params.weight(p, f) * features(t, f);
    out[p] = z;
    max = std::max(max, z);
  }
  double sum = 0.0;
  for (int32 p = 0; p < num_pdfs; ++p) sum += std::exp(out[p] - max);
  const double lse = max + std::log(sum);
  for (int32 p = 0; p < num_pdfs; ++p) out[p] -= lse;
}

std::vector<double> GradRowSums(const PdfMatrix &grad_scores) {
  std::vector<double> sums(grad_scores.NumFrames(), 0.0);
  for (int32 t = 0; t < grad_scores.NumFrames(); ++t)
    for (double g : grad_scores.Row(t)) sums[t] += g;
  return sums;
}

// d a(t,q) / d z(t,p) = [p == q] - softmax_p, so
// d loss / d z(t,p) = g(t,p) - softmax(t,p) * sum_q g(t,q).
void BackwardPdfRow(const FeatureMatrix &features, const ScoreTable &scores,
                    const PdfMatrix &grad_scores,
                    const std::vector<double> &grad_sums, int32 pdf,
                    ScorerParams *grad) {
  const int32 p = pdf - 1;
  for (int32 t = 0; t < scores.NumFrames(); ++t) {
    const double dz =
        grad_scores(t, pdf) - std::exp(scores(t, pdf)) * grad_sums[t];
    grad->bias(p) += dz;
    for (int32 f = 0; f < grad->FeatureDim(); ++f)
      grad->weight(p, f) += dz * features(t, f);
  }
}

}  // namespace internal

ScoreTable ScoreFrames(const ScorerParams &params, const FeatureMatrix &features) {
  internal::CheckDims(params, features);
  const int32 num_frames = static_cast<int32>(features.rows());
  ScoreTable scores(num_frames, params.NumPdfs());
  for (int32 t = 0; t < num_frames; ++t)
    internal::ScoreFrameRow(params, features, t, scores.Row(t));
  return scores;
}

ScorerParams ScorerBackward(const ScorerParams &params,
                            const FeatureMatrix &features,
                            const ScoreTable &scores,
                            const PdfMatrix &grad_scores) {
  internal::CheckDims(params, features);
  if (grad_scores.NumFrames() != features.rows() ||
      grad_scores.NumPdfs() != params.NumPdfs() ||
      scores.NumFrames() != grad_scores.NumFrames() ||
      scores.NumPdfs() != grad_scores.NumPdfs())
    throw std::invalid_argument("ScorerBackward: dimension mismatch");
  ScorerParams grad = ScorerParams::Zero(params.NumPdfs(), params.FeatureDim());
  const std::vector<double> sums = internal::GradRowSums(grad_scores);
  for (PdfId pdf = 1; pdf <= params.NumPdfs(); ++pdf)
    internal::BackwardPdfRow(features, scores, grad_scores, sums, pdf, &grad);
  return grad;
}

}  // namespace latmmi
