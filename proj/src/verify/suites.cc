// src/verify/suites.cc
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

#include "verify/suites.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "base/random.h"
#include "base/text-utils.h"
#include "io/pipeline.h"
#include "json.hpp"
#include "lat/lattice-algorithms.h"
#include "mmi/mmi-objectives.h"
#include "mmi/theorem-harness.h"
#include "parallel/batch-objective.h"
#include "verify/random-lattice.h"

namespace latmmi {

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

double Median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Shifts one arc weight; the result is still a valid lattice.
Lattice PerturbArc(const Lattice &lat, int32 arc_id, double delta) {
  std::vector<Arc> arcs = lat.Arcs();
  arcs.at(arc_id).graph_weight += delta;
  return Lattice(lat.NumFrames(), lat.StateFrames(), lat.Start(), lat.Finals(),
                 std::move(arcs));
}

RandomLatticeOptions OracleLatticeOptions() {
  RandomLatticeOptions o;
  o.max_frames = 12;
  o.max_out_arcs = 4;
  o.max_paths = 1e4;
  return o;
}

double LogSumOfScores(const std::vector<ScoredPath> &paths) {
  std::vector<double> s;
  s.reserve(paths.size());
  for (const ScoredPath &p : paths) s.push_back(p.score);
  return LogSumExp(s);
}

// ---------------------------------------------------------------- oracle

CriterionResult CheckForward(const SuiteOptions &opts) {
  const auto start = Clock::now();
  CriterionResult r{1, "forward-oracle"};
  double max_err = 0.0, max_beta_err = 0.0;
  int32 worst = -1;
  for (int32 i = 0; i < 200; ++i) {
    std::mt19937_64 rng(DeriveSeed(opts.seed, 1, i));
    Lattice lat = RandomLattice(OracleLatticeOptions(), rng);
    const ScoreTable scores = RandomScores(lat.NumFrames(), 5, 1.0, rng);
    const std::vector<ScoredPath> paths = EnumeratePaths(lat, scores, 1e4);
    const Lattice &tested =
        opts.corrupt && i == 0 ? PerturbArc(lat, 0, 1e-3) : lat;
    const double fwd = ForwardLogSum(tested, scores);
    const double err = std::abs(fwd - LogSumOfScores(paths));
    const double beta_err = std::abs(BackwardFill(tested, scores).Total(tested) - fwd);
    if (err > max_err) {
      max_err = err;
      worst = i;
    }
    max_beta_err = std::max(max_beta_err, beta_err);
  }
  r.passed = max_err <= 1e-9 && max_beta_err <= 1e-9;
  r.values = {{"lattices", 200}, {"max_abs_error", max_err},
              {"max_backward_gap", max_beta_err}};
  r.detail = "200 lattices, max |forward - logsumexp(paths)| = " +
             FormatScore(max_err) + " (tol 1e-9)";
  if (!r.passed) r.detail += ", worst lattice #" + std::to_string(worst);
  r.seconds = Seconds(start);
  return r;
}

CriterionResult CheckViterbiDeterminize(const SuiteOptions &opts) {
  const auto start = Clock::now();
  CriterionResult r{2, "viterbi-determinize-oracle"};
  int32 viterbi_bad = 0, det_bad = 0, count_bad = 0;
  for (int32 i = 0; i < 200; ++i) {
    std::mt19937_64 rng(DeriveSeed(opts.seed, 1, i));
    Lattice lat = RandomLattice(OracleLatticeOptions(), rng);
    const ScoreTable scores = RandomScores(lat.NumFrames(), 5, 1.0, rng);
    const std::vector<ScoredPath> paths = EnumeratePaths(lat, scores, 1e4);

    double best = kLogZero;
    std::map<WordSequence, double> group_max;
    for (const ScoredPath &p : paths) {
      best = std::max(best, p.score);
      auto [it, fresh] = group_max.emplace(p.path.words, p.score);
      if (!fresh) it->second = std::max(it->second, p.score);
    }
    const Lattice &tested = opts.corrupt && i == 0 ? PerturbArc(lat, 0, 0.5) : lat;
    if (ViterbiBestPath(tested, scores).score != best) ++viterbi_bad;

    const Lattice det = DeterminizeBestAlignment(tested, scores);
    const std::vector<ScoredPath> kept = EnumeratePaths(det, scores, 1e4);
    std::map<WordSequence, double> kept_scores;
    bool dup = false;
    for (const ScoredPath &p : kept) dup |= !kept_scores.emplace(p.path.words, p.score).second;
    if (dup || kept_scores.size() != group_max.size()) ++count_bad;
    if (kept_scores.size() == group_max.size()) {
      for (const auto &[words, score] : group_max) {
        auto it = kept_scores.find(words);
        if (it == kept_scores.end() || it->second != score) {
          ++det_bad;
          break;
        }
      }
    }
  }
  r.passed = viterbi_bad == 0 && det_bad == 0 && count_bad == 0;
  r.values = {{"lattices", 200}, {"viterbi_mismatches", viterbi_bad},
              {"group_max_mismatches", det_bad}, {"group_count_mismatches", count_bad}};
  r.detail = "200 lattices, Viterbi mismatches " + std::to_string(viterbi_bad) +
             ", per-word-sequence max mismatches " + std::to_string(det_bad) +
             ", word-sequence count mismatches " + std::to_string(count_bad);
  r.seconds = Seconds(start);
  return r;
}

CriterionResult CheckSampling(const SuiteOptions &opts) {
  const auto start = Clock::now();
  CriterionResult r{3, "ancestral-sampling"};
  constexpr int32 kSamples = 200000;
  double max_tv = 0.0, max_local = 0.0;
  RandomLatticeOptions o;
  o.max_frames = 6;
  o.max_out_arcs = 3;
  o.min_paths = 2;
  o.max_paths = 8;
  for (int32 i = 0; i < 20; ++i) {
    std::mt19937_64 rng(DeriveSeed(opts.seed, 3, i));
    Lattice lat = RandomLattice(o, rng);
    const ScoreTable scores = RandomScores(lat.NumFrames(), 5, 1.0, rng);
    const std::vector<ScoredPath> paths = EnumeratePaths(lat, scores, 8);
    const double total = ForwardLogSum(lat, scores);
    std::map<std::vector<int32>, double> exact;
    for (const ScoredPath &p : paths) exact[p.path.arc_ids] = std::exp(p.score - total);

    // A corrupted run samples with the wrong lattice weights.
    const Lattice &sampled = opts.corrupt && i == 0 ? PerturbArc(lat, 0, 1.0) : lat;
    const BackwardTable beta = BackwardFill(sampled, scores);
    AncestralSampler sampler(sampled, scores, beta);
    std::mt19937_64 draw(DeriveSeed(opts.seed, 33, i));
    std::map<std::vector<int32>, int64> counts;
    for (int32 k = 0; k < kSamples; ++k) ++counts[sampler.Sample(draw).arc_ids];
    double tv = 0.0;
    for (const auto &[ids, prob] : exact) {
      auto it = counts.find(ids);
      const double freq = it == counts.end() ? 0.0 : double(it->second) / kSamples;
      tv += std::abs(freq - prob);
    }
    tv *= 0.5;
    max_tv = std::max(max_tv, tv);
    max_local = std::max(max_local, sampler.MaxLocalNormError());
  }
  r.passed = max_tv <= 0.01 && max_local <= 1e-12;
  r.values = {{"lattices", 20}, {"samples_per_lattice", kSamples},
              {"max_tv_distance", max_tv}, {"max_local_norm_error", max_local}};
  r.detail = "20 lattices x 200k samples, max TV distance " + FormatScore(max_tv) +
             " (tol 0.01), max local normalization error " + FormatScore(max_local);
  r.seconds = Seconds(start);
  return r;
}

CriterionResult CheckOtfIdentity(const SuiteOptions &opts) {
  const auto start = Clock::now();
  CriterionResult r{6, "otf-baseline-identity"};
  int32 mismatches = 0;
  RandomLatticeOptions o = OracleLatticeOptions();
  o.max_paths = 2000;
  for (int32 i = 0; i < 100; ++i) {
    std::mt19937_64 rng(DeriveSeed(opts.seed, 6, i));
    Lattice lat = RandomLattice(o, rng);
    const ScoreTable scores = RandomScores(lat.NumFrames(), 5, 1.0, rng);
    const Path num = ViterbiBestPath(lat, scores).path;
    const NumeratorSpec spec = NumeratorSpec::Fixed(num);
    const MmiEvaluation otf = OtfMmi(spec, lat, scores, 0);
    const Lattice det = DeterminizeBestAlignment(
        opts.corrupt && i == 0 ? PerturbArc(lat, 0, 0.25) : lat, scores);
    const MmiEvaluation base = BaselineLatticeMmi(spec, det, scores, 0);
    bool same = otf.loss == base.loss &&
                otf.denominator_logprob == base.denominator_logprob &&
                otf.numerator_logprob == base.numerator_logprob;
    for (int32 t = 0; same && t < scores.NumFrames(); ++t)
      for (PdfId p = 1; p <= scores.NumPdfs(); ++p)
        same = same && otf.grad(t, p) == base.grad(t, p);
    mismatches += !same;
  }
  r.passed = mismatches == 0;
  r.values = {{"pairs", 100}, {"mismatches", mismatches}};
  r.detail = "100 (lattice, scores) pairs, " + std::to_string(mismatches) +
             " differ in loss or gradient (exact comparison)";
  r.seconds = Seconds(start);
  return r;
}

// -------------------------------------------------------------- gradient

struct GradientCase {
  std::function<MmiEvaluation(const ScoreTable &)> eval;
  // Encodes every discrete choice the loss depends on; entries whose
  // perturbation changes it are skipped.
  std::function<std::vector<int32>(const ScoreTable &)> selection;
};

std::vector<int32> SelectionKey(const Lattice &lat, const ScoreTable &scores) {
  std::vector<int32> key;
  for (const WordSequenceBest &w : BestAlignmentPerWordSequence(lat, scores)) {
    key.insert(key.end(), w.best.path.arc_ids.begin(), w.best.path.arc_ids.end());
    key.push_back(-1);
  }
  return key;
}

// Relative error with a floor on the denominator: entries whose exact
// gradient is zero would otherwise turn rounding noise into a relative error
// of order one.
double RelativeError(double an, double fd, double floor) {
  return std::abs(an - fd) / std::max({std::abs(an), std::abs(fd), floor});
}

}  // namespace

std::vector<CriterionResult> RunOracleSuite(const SuiteOptions &opts) {
  return {CheckForward(opts), CheckViterbiDeterminize(opts), CheckSampling(opts),
          CheckOtfIdentity(opts)};
}

std::vector<CriterionResult> RunGradientSuite(const SuiteOptions &opts) {
  const auto start = Clock::now();
  CriterionResult r{4, "gradient-fidelity"};
  constexpr double kStep = 1e-5;
  const char *names[] = {"true_mmi", "baseline_lattice_mmi", "otf_mmi"};
  struct Stats {
    double max_rel = 0.0, max_abs = 0.0;
    int64 checked = 0, skipped = 0;
  } stats[3];

  RandomLatticeOptions o;
  o.max_frames = 6;
  o.max_out_arcs = 3;
  o.num_pdfs = 4;
  o.num_words = 2;
  o.word_prob = 0.4;
  o.min_paths = 4;
  o.max_paths = 300;
  for (int32 i = 0; i < 50; ++i) {
    std::mt19937_64 rng(DeriveSeed(opts.seed, 4, i));
    const Lattice lat = RandomLattice(o, rng);
    const int32 T = lat.NumFrames();
    const ScoreTable scores = RandomScores(T, o.num_pdfs, 1.0, rng);
    const ScoreTable ce_scores = RandomScores(T, o.num_pdfs, 1.0, rng);

    // Numerator graph: every alignment of the CE-best word sequence.
    const WordSequence ref = ViterbiBestPath(lat, ce_scores).path.words;
    std::vector<Path> ref_paths;
    for (const ScoredPath &p : EnumeratePaths(lat, scores, o.max_paths))
      if (p.path.words == ref) ref_paths.push_back(p.path);
    const Lattice num_graph = PathsToLattice(T, ref_paths);
    const NumeratorSpec fixed =
        NumeratorSpec::Fixed(ViterbiBestPath(num_graph, ce_scores).path);
    const Lattice det_ce = DeterminizeBestAlignment(lat, ce_scores);

    const GradientCase cases[3] = {
        {[&](const ScoreTable &s) { return TrueMmi(num_graph, lat, s); }, nullptr},
        {[&](const ScoreTable &s) { return BaselineLatticeMmi(fixed, det_ce, s, 0); },
         nullptr},
        {[&](const ScoreTable &s) { return OtfMmi(fixed, lat, s, 0); },
         [&](const ScoreTable &s) { return SelectionKey(lat, s); }},
    };
    for (int32 v = 0; v < 3; ++v) {
      const GradientCase &c = cases[v];
      const MmiEvaluation at = c.eval(scores);
      const std::vector<int32> key = c.selection ? c.selection(scores) : std::vector<int32>();
      for (int32 t = 0; t < T; ++t) {
        for (PdfId p = 1; p <= o.num_pdfs; ++p) {
          ScoreTable plus = scores, minus = scores;
          plus(t, p) += kStep;
          minus(t, p) -= kStep;
          if (c.selection && (c.selection(plus) != key || c.selection(minus) != key)) {
            ++stats[v].skipped;
            continue;
          }
          const double fd = (c.eval(plus).loss - c.eval(minus).loss) / (2 * kStep);
          double an = at.grad(t, p);
          if (opts.corrupt && i == 0 && t == 0 && p == 1) an += 1e-2;
          stats[v].max_abs = std::max(stats[v].max_abs, std::abs(an - fd));
          stats[v].max_rel =
              std::max(stats[v].max_rel, RelativeError(an, fd, opts.gradient_floor));
          ++stats[v].checked;
        }
      }
    }
  }
  r.passed = true;
  std::ostringstream detail;
  detail << "50 instances, step 1e-5";
  for (int32 v = 0; v < 3; ++v) {
    r.passed = r.passed && stats[v].max_rel <= 1e-4 && stats[v].checked > 0;
    r.values.emplace_back(std::string(names[v]) + ".max_rel_error", stats[v].max_rel);
    r.values.emplace_back(std::string(names[v]) + ".max_abs_error", stats[v].max_abs);
    r.values.emplace_back(std::string(names[v]) + ".checked", double(stats[v].checked));
    r.values.emplace_back(std::string(names[v]) + ".skipped_unstable",
                          double(stats[v].skipped));
    detail << "; " << names[v] << " max rel " << FormatScore(stats[v].max_rel)
           << " (" << stats[v].checked << " checked, " << stats[v].skipped
           << " unstable skipped)";
  }
  r.detail = detail.str();
  r.seconds = Seconds(start);
  return {r};
}

namespace {

// Adds `delta` to the graph weight of the first arc of utterance 0's fixed
// numerator path, in both the numerator lattice and the path.
void CorruptNumerator(UtteranceLattices *lat, double delta) {
  const int32 arc = lat->fixed_path.arc_ids.at(0);
  auto num = std::make_shared<Lattice>(PerturbArc(*lat->num, arc, delta));
  lat->fixed_path = MakePath(*num, lat->fixed_path.arc_ids);
  lat->num = std::move(num);
}

}  // namespace

std::vector<CriterionResult> RunTheoremSuite(const SuiteOptions &opts) {
  const auto start = Clock::now();
  CriterionResult r{5, "theorem-harness"};
  PreparedExperiment exp = PrepareExperiment(opts.config);
  if (opts.corrupt) CorruptNumerator(&exp.lattices.at(0), 10.0);

  TrainConfig train = opts.config.train;
  train.mode = DenominatorMode::kOtf;
  train.numerator = NumeratorMode::kFixed;
  train.iterations = std::max(train.iterations, opts.theorem_iterations);
  train.check_theorem = true;
  const TrainResult result = RunTraining(exp, train);

  const double inf = std::numeric_limits<double>::infinity();
  double norm = 0.0, group_bound = inf, reference_bound = inf, gap = 0.0, sel = 0.0;
  int32 bad_iterations = 0, first_bad = -1;
  std::string first_bad_what;
  for (const MetricsRecord &m : result.metrics) {
    norm = std::max(norm, m.normalization_residual);
    group_bound = std::min(group_bound, m.group_bound_min_residual);
    reference_bound = std::min(reference_bound, m.reference_bound_residual);
    gap = std::max(gap, m.muhat_loss_gap);
    sel = std::max(sel, m.selection_score_gap);
    if (!m.theorem_ok) {
      ++bad_iterations;
      if (first_bad < 0) {
        first_bad = m.iteration;
        if (m.normalization_residual > kTheoremSlack) first_bad_what = "normalization";
        else if (m.group_bound_min_residual < -kTheoremSlack) first_bad_what = "group-bound";
        else if (m.reference_bound_residual < -kTheoremSlack) first_bad_what = "reference-bound";
        else if (m.muhat_loss_gap > kTheoremSlack) first_bad_what = "muhat-loss-identity";
        else first_bad_what = "selection-consistency";
      }
    }
  }
  r.passed = bad_iterations == 0 && !result.metrics.empty();
  r.values = {{"iterations", double(result.metrics.size())},
              {"max_normalization_residual", norm},
              {"min_group_bound_residual", group_bound},
              {"min_reference_bound_residual", reference_bound},
              {"max_muhat_loss_gap", gap},
              {"max_selection_score_gap", sel},
              {"violating_iterations", double(bad_iterations)}};
  std::ostringstream d;
  d << result.metrics.size() << " iterations: max normalization residual "
    << FormatScore(norm) << ", min group-bound residual " << FormatScore(group_bound)
    << ", min reference-bound residual " << FormatScore(reference_bound) << ", max |-log muhat - otf loss| "
    << FormatScore(gap);
  if (!r.passed)
    d << "; " << bad_iterations << " violating iterations, first at " << first_bad
      << " (" << first_bad_what << ")";
  r.detail = d.str();
  r.seconds = Seconds(start);
  return {r};
}

std::vector<CriterionResult> RunExperimentSuite(const SuiteOptions &opts) {
  const auto start = Clock::now();
  const DenominatorMode modes[] = {DenominatorMode::kBaseline, DenominatorMode::kOtf};
  const NumeratorMode nums[] = {NumeratorMode::kFixed, NumeratorMode::kViterbi,
                                NumeratorMode::kAncestral};
  // [mode][numerator] -> per-seed values
  std::vector<double> ser[2][3], loss[2][3];
  for (int32 s = 0; s < opts.experiment_seeds; ++s) {
    ExperimentConfig config = opts.config;
    config.OverrideSeed(DeriveSeed(opts.seed, 7, s));
    const PreparedExperiment exp = PrepareExperiment(config);
    for (int32 m = 0; m < 2; ++m) {
      for (int32 n = 0; n < 3; ++n) {
        TrainConfig train = config.train;
        train.mode = modes[m];
        train.numerator = nums[n];
        train.check_theorem = false;
        const TrainResult result = RunTraining(exp, train);
        ser[m][n].push_back(
            DecodeSetParallel(exp.task.space, result.selected_params, exp.data.test)
                .sentence_error);
        loss[m][n].push_back(
            DecodeSetParallel(exp.task.space, result.selected_params, exp.data.train)
                .mean_true_loss);
      }
    }
  }
  const double elapsed = Seconds(start);

  CriterionResult c7{7, "numerator-selection-ordering"};
  c7.passed = true;
  std::ostringstream d7;
  d7 << opts.experiment_seeds << " seeds, median test sentence error";
  for (int32 m = 0; m < 2; ++m) {
    const double fixed = Median(ser[m][0]), vit = Median(ser[m][1]),
                 anc = Median(ser[m][2]);
    const char *mode = DenominatorModeName(modes[m]);
    c7.values.emplace_back(std::string(mode) + ".fixed", fixed);
    c7.values.emplace_back(std::string(mode) + ".viterbi", vit);
    c7.values.emplace_back(std::string(mode) + ".ancestral", anc);
    c7.passed = c7.passed && fixed <= vit && fixed <= anc;
    d7 << "; " << mode << ": fixed " << FormatScore(fixed) << ", viterbi "
       << FormatScore(vit) << ", ancestral " << FormatScore(anc);
  }
  c7.detail = d7.str();
  c7.seconds = elapsed;

  CriterionResult c8{8, "otf-vs-baseline-ordering"};
  const double loss_base = Median(loss[0][0]), loss_otf = Median(loss[1][0]);
  const double ser_base = Median(ser[0][0]), ser_otf = Median(ser[1][0]);
  c8.passed = loss_otf <= loss_base && ser_otf <= ser_base;
  c8.values = {{"baseline.true_loss", loss_base}, {"otf.true_loss", loss_otf},
               {"baseline.sentence_error", ser_base}, {"otf.sentence_error", ser_otf}};
  c8.detail = std::to_string(opts.experiment_seeds) +
              " seeds, fixed numerator; median train true-MMI loss otf " +
              FormatScore(loss_otf) + " vs baseline " + FormatScore(loss_base) +
              "; median test sentence error otf " + FormatScore(ser_otf) +
              " vs baseline " + FormatScore(ser_base);
  c8.seconds = elapsed;

  const auto start9 = Clock::now();
  CriterionResult c9{9, "lattice-size-ratio"};
  const PreparedExperiment exp = PrepareExperiment(opts.config);
  const LatticeSizeSummary sizes = SummarizeLattices(exp.lattices);
  c9.passed = sizes.ArcRatio() > 1.0;
  c9.values = {{"raw_arcs", double(sizes.raw_arcs)}, {"det_arcs", double(sizes.det_arcs)},
               {"arc_ratio", sizes.ArcRatio()}, {"path_ratio", sizes.PathRatio()}};
  c9.detail = "default config, " + std::to_string(sizes.utterances) +
              " utterances: raw/det arc ratio " + FormatScore(sizes.ArcRatio()) +
              ", path ratio " + FormatScore(sizes.PathRatio());
  c9.seconds = Seconds(start9);
  return {c7, c8, c9};
}

std::vector<CriterionResult> RunSuite(const std::string &name,
                                      const SuiteOptions &opts) {
  if (name == "oracle") return RunOracleSuite(opts);
  if (name == "gradient") return RunGradientSuite(opts);
  if (name == "theorem") return RunTheoremSuite(opts);
  if (name == "experiments") return RunExperimentSuite(opts);
  throw std::invalid_argument("unknown suite '" + name +
                              "' (expected oracle, gradient, theorem or experiments)");
}

std::string SuiteReportJson(const std::string &suite,
                            const std::vector<CriterionResult> &results) {
  nlohmann::ordered_json j;
  j["suite"] = suite;
  bool all = true;
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const CriterionResult &r : results) {
    nlohmann::ordered_json c;
    c["id"] = r.id;
    c["name"] = r.name;
    c["passed"] = r.passed;
    c["detail"] = r.detail;
    c["seconds"] = r.seconds;
    nlohmann::ordered_json values = nlohmann::ordered_json::object();
    for (const auto &[k, v] : r.values) values[k] = std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(FormatScore(v));
    c["values"] = values;
    list.push_back(c);
    all = all && r.passed;
  }
  j["criteria"] = list;
  j["all_passed"] = all;
  return j.dump();
}

std::string FormatCriterionLine(const CriterionResult &r) {
  return std::string(r.passed ? "PASS" : "FAIL") + " [" + std::to_string(r.id) +
         "] " + r.name + ": " + r.detail;
}

}  // namespace latmmi
