// src/toy/training.h
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

#ifndef LATMMI_TOY_TRAINING_H_
#define LATMMI_TOY_TRAINING_H_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "parallel/batch-objective.h"
#include "toy/lattice-gen.h"
#include "toy/scorer.h"
#include "toy/synth-data.h"

namespace latmmi {

struct CeConfig {
  double learning_rate = 1.0;
  int32 iterations = 50;
  double init_scale = 0.0;  // std-dev of the random initial weights
  uint64 seed = 11;
};

/// Full-batch gradient descent on the mean per-frame negative log-likelihood
/// of the true alignments.  Throws std::runtime_error if the loss becomes
/// non-finite.
ScorerParams CePretrain(const std::vector<Utterance> &data, int32 num_pdfs,
                        const CeConfig &config);

/// Mean frame NLL of the true alignments.
double FrameCrossEntropy(const ScorerParams &params,
                         const std::vector<Utterance> &data);
/// Fraction of frames whose argmax pdf is the true one.
double FrameAccuracy(const ScorerParams &params,
                     const std::vector<Utterance> &data);

struct TrainConfig {
  DenominatorMode mode = DenominatorMode::kOtf;
  NumeratorMode numerator = NumeratorMode::kFixed;
  int32 K = 4;
  double learning_rate = 0.3;
  int32 iterations = 400;
  int32 batch_size = 8;
  uint64 seed = 17;
  bool check_theorem = true;
  bool parallel = true;
  /// Throws std::invalid_argument on non-positive sizes or negative rates.
  void Check() const;
};

/// One row of the metrics stream.  Losses are batch means under the
/// parameters before the update of that iteration; the held-out numbers are
/// for the parameters after it.
struct MetricsRecord {
  int32 iteration = 0;
  std::string mode;
  std::string numerator_mode;
  double loss_objective = 0.0;
  double loss_true = 0.0;
  double loss_baseline = 0.0;
  double loss_otf = 0.0;
  double normalization_residual = 0.0;
  double group_bound_min_residual = 0.0;
  double reference_bound_residual = 0.0;
  double muhat_loss_gap = 0.0;
  double selection_score_gap = 0.0;
  bool theorem_checked = false;
  bool theorem_ok = true;
  double heldout_sentence_error = 0.0;
  double heldout_true_loss = 0.0;
};

struct TrainResult {
  ScorerParams final_params;
  ScorerParams selected_params;
  int32 selected_iteration = 0;  // 0 means the initial parameters
  std::vector<MetricsRecord> metrics;
  bool theorem_ok = true;
};

using MetricsCallback = std::function<void(const MetricsRecord &)>;

/// Minibatch gradient descent from `init`.  The model is selected by
/// held-out sentence error, then held-out true loss, then the earliest
/// iteration.  Throws std::runtime_error on a non-finite loss; the records
/// emitted so far have already gone to `on_record`.
TrainResult Train(const HypothesisSpace &space,
                  const std::vector<Utterance> &train,
                  const std::vector<UtteranceLattices> &lattices,
                  const std::vector<Utterance> &heldout,
                  const ScorerParams &init, const TrainConfig &config,
                  const MetricsCallback &on_record = nullptr);

}  // namespace latmmi

#endif  // LATMMI_TOY_TRAINING_H_
