// src/mmi/theorem-harness.h
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

#ifndef LATMMI_MMI_THEOREM_HARNESS_H_
#define LATMMI_MMI_THEOREM_HARNESS_H_

#include <map>
#include <optional>
#include <vector>

#include "lat/lattice-algorithms.h"
#include "lat/lattice.h"

namespace latmmi {

// Numerical instantiation of the discrete path measure over a complete
// hypothesis graph X:
//
//   m(y)    = exp(score(y) - log P(O)),  log P(O) = ForwardLogSum(X)
//   mu(S)   = sum_{y in S} m(y)
//   muhat(A^) = m(A^) / sum_j m(B^_j)
//
// where A is the set of reference alignments, B_j the alignments of
// hypothesis j, A^ a single fixed reference alignment and B^_j the best
// alignment of B_j.  All arithmetic stays in the log domain and is
// exponentiated only when a residual is formed.

inline constexpr double kTheoremSlack = 1e-9;

/// Posterior mass of one alignment of `full_graph`.  A path read from the
/// graph itself is scored as is; any other path is located by its pdf and
/// word sequences.  Throws std::invalid_argument if absent.
double MeasureM(const Path &path, const Lattice &full_graph,
                const ScoreTable &scores);

/// |sum over enumerated paths of m - 1|.
double CheckNormalization(const Lattice &full_graph, const ScoreTable &scores,
                          double max_paths = 1e6);

struct HypothesisGrouping {
  WordSequence reference_words;
  double log_total = 0.0;  // log P(O) over the complete graph
  std::vector<ScoredPath> reference_set;                           // A
  std::map<WordSequence, std::vector<ScoredPath>> competitor_sets;  // B_j
  ScoredPath selected_reference;                                   // A^
  ScoredPath reference_best;  // best alignment of A, i.e. B^ of W_ref
  std::map<WordSequence, ScoredPath> selected_competitors;         // B^_j

  double LogM(const ScoredPath &p) const { return p.score - log_total; }
};

/// Partitions the enumerated paths of `full_graph` by word sequence and picks
/// the per-group argmax (ties by ViterbiTieLess).  A^ is `fixed_ref_path`
/// itself, scored with its own arc weights; the graph must contain an
/// alignment with the same pdf and word sequences.
HypothesisGrouping BuildGrouping(const Lattice &full_graph,
                                 const ScoreTable &scores,
                                 const WordSequence &ref_words,
                                 const Path &fixed_ref_path,
                                 double max_paths = 1e6);

/// Per group (every hypothesis, the reference included):
/// |B_j| * m(B^_j) - mu(B_j), which must be >= -kTheoremSlack.
std::map<WordSequence, double> CheckGroupBound(
    const HypothesisGrouping &grouping);

/// mu(A) - m(A^), which must be >= -kTheoremSlack.
double CheckReferenceBound(const HypothesisGrouping &grouping);

/// muhat(A^) restricted to the hypotheses in `hypotheses` (all hypotheses of
/// the grouping when empty).  With include_reference the reference hypothesis
/// contributes its best alignment B^_ref to the denominator; otherwise the
/// denominator is m(A^) plus the competitors' B^_j.
double MuHatOfA(const HypothesisGrouping &grouping,
                const std::vector<WordSequence> &hypotheses,
                bool include_reference);

struct MeasureReport {
  std::vector<double> m_values;  // per enumerated path, enumeration order
  double mu_reference = 0.0;     // mu(A)
  double m_selected_reference = 0.0;
  double normalization_residual = 0.0;
  std::map<WordSequence, double> group_bound_residuals;
  double group_bound_min_residual = 0.0;
  double reference_bound_residual = 0.0;
  double muhat_include_reference = 0.0;
  double muhat_exclude_reference = 0.0;
  /// |-log muhat(A^) - otf loss|; only set when an otf loss was supplied.
  std::optional<double> muhat_loss_gap;
  /// Largest |score(B^_j) - score of the alignment kept by determinization|
  /// over the checked hypotheses; only set when a determinized lattice was
  /// supplied.
  std::optional<double> selection_score_gap;

  bool normalization_ok = true;
  bool group_bound_ok = true;
  bool reference_bound_ok = true;
  bool muhat_ok = true;
  bool selection_ok = true;

  bool AllOk() const {
    return normalization_ok && group_bound_ok && reference_bound_ok &&
           muhat_ok && selection_ok;
  }
};

struct TheoremCheckInput {
  const Lattice *full_graph = nullptr;
  const ScoreTable *scores = nullptr;
  WordSequence ref_words;
  const Path *fixed_ref_path = nullptr;
  /// Hypotheses captured by the denominator lattice (empty: all).
  std::vector<WordSequence> hypotheses;
  /// Loss of OtfMmi with A^ as fixed numerator on the same hypotheses.
  std::optional<double> otf_loss;
  /// DeterminizeBestAlignment of the denominator lattice under `scores`.
  const Lattice *determinized = nullptr;
  double max_paths = 1e6;
};

/// Runs every check; residuals are the exact values behind the booleans.
MeasureReport RunTheoremChecks(const TheoremCheckInput &in);

}  // namespace latmmi

#endif  // LATMMI_MMI_THEOREM_HARNESS_H_
