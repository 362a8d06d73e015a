// src/toy/training.cc
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

#include "toy/training.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "base/random.h"
#include "base/text-utils.h"

namespace latmmi {

namespace {

// Gradient of the summed frame NLL with respect to the scores of one
// utterance: -1 at each true (t, pdf).
PdfMatrix CeScoreGrad(const Utterance &u, int32 num_pdfs) {
  PdfMatrix g(static_cast<int32>(u.features.rows()), num_pdfs, 0.0);
  for (int32 t = 0; t < g.NumFrames(); ++t) g(t, u.true_alignment.pdfs[t]) = -1.0;
  return g;
}

}  // namespace

double FrameCrossEntropy(const ScorerParams &params,
                         const std::vector<Utterance> &data) {
  double total = 0.0;
  int64 frames = 0;
  for (const Utterance &u : data) {
    const ScoreTable s = ScoreFrames(params, u.features);
    for (int32 t = 0; t < s.NumFrames(); ++t) total -= s(t, u.true_alignment.pdfs[t]);
    frames += s.NumFrames();
  }
  return frames > 0 ? total / frames : 0.0;
}

double FrameAccuracy(const ScorerParams &params,
                     const std::vector<Utterance> &data) {
  int64 correct = 0, frames = 0;
  for (const Utterance &u : data) {
    const ScoreTable s = ScoreFrames(params, u.features);
    for (int32 t = 0; t < s.NumFrames(); ++t) {
      PdfId best = 1;
      for (PdfId p = 2; p <= s.NumPdfs(); ++p)
        if (s(t, p) > s(t, best)) best = p;
      correct += best == u.true_alignment.pdfs[t];
      ++frames;
    }
  }
  return frames > 0 ? static_cast<double>(correct) / frames : 0.0;
}

ScorerParams CePretrain(const std::vector<Utterance> &data, int32 num_pdfs,
                        const CeConfig &config) {
  if (data.empty()) throw std::invalid_argument("CePretrain: empty dataset");
  if (config.iterations < 0 || config.learning_rate < 0.0)
    throw std::invalid_argument("CePretrain: negative iterations or rate");
  const int32 dim = static_cast<int32>(data.front().features.cols());
  ScorerParams params =
      config.init_scale > 0.0
          ? ScorerParams::Random(num_pdfs, dim, config.init_scale, config.seed)
          : ScorerParams::Zero(num_pdfs, dim);
  int64 frames = 0;
  for (const Utterance &u : data) frames += u.features.rows();

  for (int32 it = 0; it < config.iterations; ++it) {
    ScorerParams grad = ScorerParams::Zero(num_pdfs, dim);
    double loss = 0.0;
    for (const Utterance &u : data) {
      const ScoreTable s = ScoreFrames(params, u.features);
      for (int32 t = 0; t < s.NumFrames(); ++t) loss -= s(t, u.true_alignment.pdfs[t]);
      grad.AddScaled(ScorerBackward(params, u.features, s, CeScoreGrad(u, num_pdfs)),
                     1.0);
    }
    if (!std::isfinite(loss) || !grad.AllFinite())
      throw std::runtime_error("CePretrain: non-finite loss at iteration " +
                               std::to_string(it) + " (frame NLL " +
                               FormatScore(loss / frames) + ")");
    params.AddScaled(grad, -config.learning_rate / frames);
  }
  return params;
}

void TrainConfig::Check() const {
  if (K < 1) throw std::invalid_argument("train: K must be >= 1");
  if (iterations < 0) throw std::invalid_argument("train: negative iterations");
  if (batch_size < 1) throw std::invalid_argument("train: batch_size must be >= 1");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
    throw std::invalid_argument("train: learning_rate must be finite and >= 0");
}

TrainResult Train(const HypothesisSpace &space,
                  const std::vector<Utterance> &train,
                  const std::vector<UtteranceLattices> &lattices,
                  const std::vector<Utterance> &heldout,
                  const ScorerParams &init, const TrainConfig &config,
                  const MetricsCallback &on_record) {
  config.Check();
  if (train.empty()) throw std::invalid_argument("train: empty training set");
  if (lattices.size() != train.size())
    throw std::invalid_argument("train: one lattice set per utterance required");

  ObjectiveContext ctx;
  ctx.space = &space;
  ctx.utts = &train;
  ctx.lattices = &lattices;
  ctx.mode = config.mode;
  ctx.numerator = config.numerator;
  ctx.check_theorem = config.check_theorem;
  ctx.seed = DeriveSeed(config.seed, 1);

  auto decode = [&](const ScorerParams &p) {
    return config.parallel ? DecodeSetParallel(space, p, heldout)
                           : DecodeSetSerial(space, p, heldout);
  };

  TrainResult result;
  ScorerParams params = init;
  result.selected_params = init;
  DecodeSummary best = decode(init);

  const int32 n = static_cast<int32>(train.size());
  std::vector<int32> order(n);
  std::iota(order.begin(), order.end(), 0);
  int32 cursor = n;
  int32 epoch = 0;

  for (int32 it = 1; it <= config.iterations; ++it) {
    std::vector<int32> batch;
    while (static_cast<int32>(batch.size()) < std::min(config.batch_size, n)) {
      if (cursor == n) {
        std::iota(order.begin(), order.end(), 0);
        std::mt19937_64 rng(DeriveSeed(config.seed, 2, epoch++));
        std::shuffle(order.begin(), order.end(), rng);
        cursor = 0;
      }
      batch.push_back(order[cursor++]);
    }
    // Fixed accumulation order regardless of the shuffle.
    std::sort(batch.begin(), batch.end());

    const BatchResult b = config.parallel
                              ? EvaluateBatchParallel(ctx, params, batch, it)
                              : EvaluateBatchSerial(ctx, params, batch, it);
    const double inv = 1.0 / b.count;

    MetricsRecord rec;
    rec.iteration = it;
    rec.mode = DenominatorModeName(config.mode);
    rec.numerator_mode = NumeratorModeName(config.numerator);
    rec.loss_objective = b.sum_objective * inv;
    rec.loss_true = b.sum_true * inv;
    rec.loss_baseline = b.sum_baseline * inv;
    rec.loss_otf = b.sum_otf * inv;
    rec.theorem_checked = config.check_theorem;
    if (config.check_theorem) {
      rec.normalization_residual = b.normalization_max;
      rec.group_bound_min_residual = b.group_bound_min;
      rec.reference_bound_residual = b.reference_bound_min;
      rec.muhat_loss_gap = b.muhat_gap_max;
      rec.selection_score_gap = b.selection_gap_max;
      rec.theorem_ok = b.theorem_ok;
    }
    if (!std::isfinite(rec.loss_objective) || !std::isfinite(rec.loss_true) ||
        !b.grad_sum.AllFinite()) {
      throw std::runtime_error("train: non-finite loss at iteration " +
                               std::to_string(it) + " (objective " +
                               FormatScore(rec.loss_objective) + ", true " +
                               FormatScore(rec.loss_true) + ")");
    }
    params.AddScaled(b.grad_sum, -config.learning_rate * inv);

    const DecodeSummary d = decode(params);
    rec.heldout_sentence_error = d.sentence_error;
    rec.heldout_true_loss = d.mean_true_loss;
    if (d.sentence_error < best.sentence_error ||
        (d.sentence_error == best.sentence_error &&
         d.mean_true_loss < best.mean_true_loss)) {
      best = d;
      result.selected_params = params;
      result.selected_iteration = it;
    }
    result.theorem_ok = result.theorem_ok && rec.theorem_ok;
    result.metrics.push_back(rec);
    if (on_record) on_record(rec);
  }
  result.final_params = std::move(params);
  return result;
}

}  // namespace latmmi
