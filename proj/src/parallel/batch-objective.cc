// src/parallel/batch-objective.cc
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

#include "parallel/batch-objective.h"

#include <algorithm>
#include <exception>
#include <stdexcept>

#include "base/random.h"
#include "toy/decode.h"

namespace latmmi {

const char *DenominatorModeName(DenominatorMode mode) {
  return mode == DenominatorMode::kBaseline ? "baseline" : "otf";
}

DenominatorMode ParseDenominatorMode(const std::string &name) {
  if (name == "baseline") return DenominatorMode::kBaseline;
  if (name == "otf") return DenominatorMode::kOtf;
  throw std::invalid_argument("unknown denominator mode '" + name +
                              "' (expected baseline or otf)");
}

UtteranceResult EvaluateUtterance(const ObjectiveContext &ctx,
                                  const ScorerParams &params, int32 utt,
                                  int32 iteration) {
  const Utterance &u = ctx.utts->at(utt);
  const UtteranceLattices &lat = ctx.lattices->at(utt);
  const HypothesisSpace &space = *ctx.space;
  const ScoreTable scores = ScoreFrames(params, u.features);
  const uint64 seed = DeriveSeed(ctx.seed, static_cast<uint64>(iteration),
                                 static_cast<uint64>(utt));

  const NumeratorSpec fixed = NumeratorSpec::Fixed(lat.fixed_path);
  const NumeratorSpec num = ctx.numerator == NumeratorMode::kFixed
                                ? fixed
                                : NumeratorSpec::Sampled(ctx.numerator, lat.num);
  // Re-selection under the current scores, shared by every otf evaluation.
  const Lattice det_now = DeterminizeBestAlignment(lat.raw, scores);

  UtteranceResult r;
  const Lattice &den = ctx.mode == DenominatorMode::kBaseline ? lat.det : det_now;
  MmiEvaluation objective = BaselineLatticeMmi(num, den, scores, seed);
  r.loss_objective = objective.loss;
  r.loss_baseline = BaselineLatticeMmi(fixed, lat.det, scores, seed).loss;
  r.loss_otf = BaselineLatticeMmi(fixed, det_now, scores, seed).loss;
  r.loss_true = ForwardLogSum(space.FullGraph(), scores) -
                ForwardLogSum(space.SentenceGraph(u.ref_sentence), scores);

  if (ctx.check_theorem) {
    TheoremCheckInput in;
    in.full_graph = &space.FullGraph();
    in.scores = &scores;
    in.ref_words = u.ref_words;
    in.fixed_ref_path = &lat.fixed_path;
    in.hypotheses = lat.hypotheses;
    in.otf_loss = r.loss_otf;
    in.determinized = &det_now;
    r.report = RunTheoremChecks(in);
  }
  r.grad = ScorerBackward(params, u.features, scores, objective.grad);
  return r;
}

BatchResult ReduceBatch(const std::vector<UtteranceResult> &results,
                        int32 num_pdfs, int32 feature_dim) {
  BatchResult b;
  b.grad_sum = ScorerParams::Zero(num_pdfs, feature_dim);
  for (const UtteranceResult &r : results) {
    ++b.count;
    b.grad_sum.AddScaled(r.grad, 1.0);
    b.sum_objective += r.loss_objective;
    b.sum_true += r.loss_true;
    b.sum_baseline += r.loss_baseline;
    b.sum_otf += r.loss_otf;
    if (r.report) {
      const MeasureReport &m = *r.report;
      b.normalization_max = std::max(b.normalization_max, m.normalization_residual);
      b.group_bound_min = std::min(b.group_bound_min, m.group_bound_min_residual);
      b.reference_bound_min = std::min(b.reference_bound_min, m.reference_bound_residual);
      if (m.muhat_loss_gap) b.muhat_gap_max = std::max(b.muhat_gap_max, *m.muhat_loss_gap);
      if (m.selection_score_gap)
        b.selection_gap_max = std::max(b.selection_gap_max, *m.selection_score_gap);
      b.theorem_ok = b.theorem_ok && m.AllOk();
    }
  }
  return b;
}

BatchResult EvaluateBatchSerial(const ObjectiveContext &ctx,
                                const ScorerParams &params,
                                const std::vector<int32> &utts,
                                int32 iteration) {
  std::vector<UtteranceResult> results;
  results.reserve(utts.size());
  for (int32 u : utts) results.push_back(EvaluateUtterance(ctx, params, u, iteration));
  return ReduceBatch(results, params.NumPdfs(), params.FeatureDim());
}

BatchResult EvaluateBatchParallel(const ObjectiveContext &ctx,
                                  const ScorerParams &params,
                                  const std::vector<int32> &utts,
                                  int32 iteration) {
  const int64 n = static_cast<int64>(utts.size());
  std::vector<UtteranceResult> results(n);
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (int64 i = 0; i < n; ++i) {
    try {
      results[i] = EvaluateUtterance(ctx, params, utts[i], iteration);
    } catch (...) {
#pragma omp critical(latmmi_batch_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return ReduceBatch(results, params.NumPdfs(), params.FeatureDim());
}

namespace {
DecodeSummary Summarize(const std::vector<UtteranceDecode> &d) {
  DecodeSummary s;
  if (d.empty()) return s;
  double errors = 0.0;
  for (const UtteranceDecode &x : d) {
    errors += x.error ? 1.0 : 0.0;
    s.mean_true_loss += x.true_loss;
  }
  s.sentence_error = errors / d.size();
  s.mean_true_loss /= d.size();
  return s;
}
}  // namespace

DecodeSummary DecodeSetSerial(const HypothesisSpace &space,
                              const ScorerParams &params,
                              const std::vector<Utterance> &utts) {
  std::vector<UtteranceDecode> d;
  d.reserve(utts.size());
  for (const Utterance &u : utts) d.push_back(DecodeUtterance(space, params, u));
  return Summarize(d);
}

DecodeSummary DecodeSetParallel(const HypothesisSpace &space,
                                const ScorerParams &params,
                                const std::vector<Utterance> &utts) {
  const int64 n = static_cast<int64>(utts.size());
  std::vector<UtteranceDecode> d(n);
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (int64 i = 0; i < n; ++i) {
    try {
      d[i] = DecodeUtterance(space, params, utts[i]);
    } catch (...) {
#pragma omp critical(latmmi_decode_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return Summarize(d);
}

}  // namespace latmmi
