// src/parallel/batch-objective.h
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

#ifndef LATMMI_PARALLEL_BATCH_OBJECTIVE_H_
#define LATMMI_PARALLEL_BATCH_OBJECTIVE_H_

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mmi/mmi-objectives.h"
#include "mmi/theorem-harness.h"
#include "toy/lattice-gen.h"
#include "toy/scorer.h"
#include "toy/synth-data.h"

namespace latmmi {

enum class DenominatorMode { kBaseline, kOtf };

const char *DenominatorModeName(DenominatorMode mode);
/// Accepts "baseline" and "otf".
DenominatorMode ParseDenominatorMode(const std::string &name);

/// Read-only state shared by all per-utterance evaluations of one run.
struct ObjectiveContext {
  const HypothesisSpace *space = nullptr;
  const std::vector<Utterance> *utts = nullptr;
  const std::vector<UtteranceLattices> *lattices = nullptr;
  DenominatorMode mode = DenominatorMode::kOtf;
  NumeratorMode numerator = NumeratorMode::kFixed;
  bool check_theorem = true;
  uint64 seed = 0;  // numerator sampling stream
};

struct UtteranceResult {
  double loss_objective = 0.0;  // the loss being trained
  double loss_true = 0.0;       // full-graph MMI
  double loss_baseline = 0.0;   // fixed numerator, CE-determinized lattice
  double loss_otf = 0.0;        // fixed numerator, re-determinized lattice
  std::optional<MeasureReport> report;
  ScorerParams grad;            // d loss_objective / d params
};

/// Everything computed for one utterance at one iteration.  The numerator
/// sample seed is DeriveSeed(ctx.seed, iteration, utt).
UtteranceResult EvaluateUtterance(const ObjectiveContext &ctx,
                                  const ScorerParams &params, int32 utt,
                                  int32 iteration);

struct BatchResult {
  int32 count = 0;
  ScorerParams grad_sum;
  double sum_objective = 0.0;
  double sum_true = 0.0;
  double sum_baseline = 0.0;
  double sum_otf = 0.0;
  // Theorem aggregates over the batch (worst case of each residual).
  double normalization_max = 0.0;
  double group_bound_min = std::numeric_limits<double>::infinity();
  double reference_bound_min = std::numeric_limits<double>::infinity();
  double muhat_gap_max = 0.0;
  double selection_gap_max = 0.0;
  bool theorem_ok = true;
};

/// Folds per-utterance results in the given order.
BatchResult ReduceBatch(const std::vector<UtteranceResult> &results,
                        int32 num_pdfs, int32 feature_dim);

/// Serial reference: utterances one after another.
BatchResult EvaluateBatchSerial(const ObjectiveContext &ctx,
                                const ScorerParams &params,
                                const std::vector<int32> &utts,
                                int32 iteration);

/// Utterances in parallel (OpenMP); reduction in the order of `utts`, so the
/// result is bit-identical to EvaluateBatchSerial.
BatchResult EvaluateBatchParallel(const ObjectiveContext &ctx,
                                  const ScorerParams &params,
                                  const std::vector<int32> &utts,
                                  int32 iteration);

struct DecodeSummary {
  double sentence_error = 0.0;
  double mean_true_loss = 0.0;
};

DecodeSummary DecodeSetSerial(const HypothesisSpace &space,
                              const ScorerParams &params,
                              const std::vector<Utterance> &utts);
DecodeSummary DecodeSetParallel(const HypothesisSpace &space,
                                const ScorerParams &params,
                                const std::vector<Utterance> &utts);

}  // namespace latmmi

#endif  // LATMMI_PARALLEL_BATCH_OBJECTIVE_H_
