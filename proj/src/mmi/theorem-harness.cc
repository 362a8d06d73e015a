// src/mmi/theorem-harness.cc
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

#include "mmi/theorem-harness.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace latmmi {

namespace {

// Best of a group: max score, ties by the backpointer rule.
const ScoredPath &GroupArgmax(const std::vector<ScoredPath> &group) {
  const ScoredPath *best = &group.front();
  for (const ScoredPath &p : group) {
    if (p.score > best->score ||
        (p.score == best->score && ViterbiTieLess(p.path, best->path)))
      best = &p;
  }
  return *best;
}

double LogSumOfScores(const std::vector<ScoredPath> &group) {
  std::vector<double> s;
  s.reserve(group.size());
  for (const ScoredPath &p : group) s.push_back(p.score);
  return LogSumExp(s);
}

HypothesisGrouping GroupPaths(const std::vector<ScoredPath> &paths,
                              double log_total, const WordSequence &ref_words,
                              const Path &fixed_ref_path,
                              const ScoreTable &scores) {
  if (fixed_ref_path.words != ref_words)
    throw std::invalid_argument(
        "BuildGrouping: fixed reference path realizes '" +
        WordSequenceToString(fixed_ref_path.words) + "', not '" +
        WordSequenceToString(ref_words) + "'");
  HypothesisGrouping g;
  g.reference_words = ref_words;
  g.log_total = log_total;
  for (const ScoredPath &p : paths) {
    if (p.path.words == ref_words)
      g.reference_set.push_back(p);
    else
      g.competitor_sets[p.path.words].push_back(p);
  }
  if (g.reference_set.empty())
    throw std::invalid_argument("BuildGrouping: reference word sequence '" +
                                WordSequenceToString(ref_words) +
                                "' does not occur in the graph");
  bool found = false;
  for (const ScoredPath &p : g.reference_set) {
    if (p.path.pdfs == fixed_ref_path.pdfs) {
      // Scored with the weights the path itself carries, so a reference
      // alignment whose lattice disagrees with the graph shows up in the
      // residuals.
      g.selected_reference = {fixed_ref_path, PathScore(fixed_ref_path, scores)};
      found = true;
      break;
    }
  }
  if (!found)
    throw std::invalid_argument(
        "BuildGrouping: fixed reference path is not an alignment of the graph");
  g.reference_best = GroupArgmax(g.reference_set);
  for (const auto &[words, group] : g.competitor_sets)
    g.selected_competitors.emplace(words, GroupArgmax(group));
  return g;
}

}  // namespace

double MeasureM(const Path &path, const Lattice &full_graph,
                const ScoreTable &scores) {
  bool own_arcs = path.arc_ids.size() == path.arcs.size();
  for (size_t i = 0; own_arcs && i < path.arc_ids.size(); ++i) {
    const int32 id = path.arc_ids[i];
    own_arcs = id >= 0 && id < full_graph.NumArcs() &&
               full_graph.GetArc(id) == path.arcs[i];
  }
  Path in_graph;
  if (own_arcs)
    in_graph = path;
  else if (!FindMatchingPath(full_graph, path.pdfs, path.words, &in_graph))
    throw std::invalid_argument("MeasureM: path is not in the graph");
  return std::exp(PathScore(in_graph, scores) -
                  ForwardLogSum(full_graph, scores));
}

double CheckNormalization(const Lattice &full_graph, const ScoreTable &scores,
                          double max_paths) {
  std::vector<ScoredPath> paths = EnumeratePaths(full_graph, scores, max_paths);
  std::vector<double> s;
  s.reserve(paths.size());
  for (const ScoredPath &p : paths) s.push_back(p.score);
  const double log_total = ForwardLogSum(full_graph, scores);
  return std::abs(std::exp(LogSumExp(s) - log_total) - 1.0);
}

HypothesisGrouping BuildGrouping(const Lattice &full_graph,
                                 const ScoreTable &scores,
                                 const WordSequence &ref_words,
                                 const Path &fixed_ref_path,
                                 double max_paths) {
  std::vector<ScoredPath> paths = EnumeratePaths(full_graph, scores, max_paths);
  return GroupPaths(paths, ForwardLogSum(full_graph, scores), ref_words,
                    fixed_ref_path, scores);
}

std::map<WordSequence, double> CheckGroupBound(
    const HypothesisGrouping &g) {
  std::map<WordSequence, double> residuals;
  auto residual = [&g](const std::vector<ScoredPath> &group,
                       const ScoredPath &best) {
    const double lhs = std::exp(std::log(static_cast<double>(group.size())) +
                                g.LogM(best));
    const double mu = std::exp(LogSumOfScores(group) - g.log_total);
    return lhs - mu;
  };
  residuals[g.reference_words] = residual(g.reference_set, g.reference_best);
  for (const auto &[words, group] : g.competitor_sets)
    residuals[words] = residual(group, g.selected_competitors.at(words));
  return residuals;
}

double CheckReferenceBound(const HypothesisGrouping &g) {
  return std::exp(LogSumOfScores(g.reference_set) - g.log_total) -
         std::exp(g.LogM(g.selected_reference));
}

double MuHatOfA(const HypothesisGrouping &g,
                const std::vector<WordSequence> &hypotheses,
                bool include_reference) {
  std::set<WordSequence> wanted(hypotheses.begin(), hypotheses.end());
  auto keep = [&wanted](const WordSequence &w) {
    return wanted.empty() || wanted.count(w) > 0;
  };
  std::vector<double> denom;
  if (include_reference) {
    if (keep(g.reference_words)) denom.push_back(g.LogM(g.reference_best));
  } else {
    denom.push_back(g.LogM(g.selected_reference));
  }
  for (const auto &[words, best] : g.selected_competitors)
    if (keep(words)) denom.push_back(g.LogM(best));
  const double log_denom = LogSumExp(denom);
  if (!std::isfinite(log_denom))
    throw std::invalid_argument(
        "MuHatOfA: denominator mass is zero (no selected hypotheses)");
  return std::exp(g.LogM(g.selected_reference) - log_denom);
}

MeasureReport RunTheoremChecks(const TheoremCheckInput &in) {
  if (!in.full_graph || !in.scores || !in.fixed_ref_path)
    throw std::invalid_argument("RunTheoremChecks: missing input");
  const Lattice &graph = *in.full_graph;
  const ScoreTable &scores = *in.scores;

  std::vector<ScoredPath> paths = EnumeratePaths(graph, scores, in.max_paths);
  const double log_total = ForwardLogSum(graph, scores);
  HypothesisGrouping g =
      GroupPaths(paths, log_total, in.ref_words, *in.fixed_ref_path, scores);

  MeasureReport r;
  std::vector<double> s;
  s.reserve(paths.size());
  r.m_values.reserve(paths.size());
  for (const ScoredPath &p : paths) {
    s.push_back(p.score);
    r.m_values.push_back(std::exp(p.score - log_total));
  }
  r.normalization_residual = std::abs(std::exp(LogSumExp(s) - log_total) - 1.0);
  r.normalization_ok = r.normalization_residual <= kTheoremSlack;

  r.group_bound_residuals = CheckGroupBound(g);
  r.group_bound_min_residual = std::numeric_limits<double>::infinity();
  for (const auto &[w, res] : r.group_bound_residuals)
    r.group_bound_min_residual = std::min(r.group_bound_min_residual, res);
  r.group_bound_ok = r.group_bound_min_residual >= -kTheoremSlack;

  r.mu_reference = std::exp(LogSumOfScores(g.reference_set) - log_total);
  r.m_selected_reference = std::exp(g.LogM(g.selected_reference));
  r.reference_bound_residual = CheckReferenceBound(g);
  r.reference_bound_ok = r.reference_bound_residual >= -kTheoremSlack;

  r.muhat_include_reference = MuHatOfA(g, in.hypotheses, true);
  r.muhat_exclude_reference = MuHatOfA(g, in.hypotheses, false);
  if (in.otf_loss) {
    r.muhat_loss_gap = std::abs(-std::log(r.muhat_include_reference) - *in.otf_loss);
    r.muhat_ok = *r.muhat_loss_gap <= kTheoremSlack;
  }

  if (in.determinized) {
    std::vector<WordSequenceBest> kept =
        BestAlignmentPerWordSequence(*in.determinized, scores);
    std::set<WordSequence> wanted(in.hypotheses.begin(), in.hypotheses.end());
    double gap = 0.0;
    bool ok = true;
    size_t matched = 0;
    for (const WordSequenceBest &item : kept) {
      if (!wanted.empty() && !wanted.count(item.words)) {
        ok = false;
        continue;
      }
      const ScoredPath *best = nullptr;
      if (item.words == g.reference_words)
        best = &g.reference_best;
      else if (auto it = g.selected_competitors.find(item.words);
               it != g.selected_competitors.end())
        best = &it->second;
      if (!best) {
        ok = false;
        continue;
      }
      ++matched;
      gap = std::max(gap, std::abs(best->score - item.best.score));
    }
    if (!wanted.empty() && matched != wanted.size()) ok = false;
    r.selection_score_gap = gap;
    r.selection_ok = ok && gap <= kTheoremSlack;
  }
  return r;
}

}  // namespace latmmi
