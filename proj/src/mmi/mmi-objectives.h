// src/mmi/mmi-objectives.h
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

#ifndef LATMMI_MMI_MMI_OBJECTIVES_H_
#define LATMMI_MMI_MMI_OBJECTIVES_H_

#include <memory>
#include <optional>
#include <string>

#include "lat/lattice-algorithms.h"
#include "lat/lattice.h"

namespace latmmi {

// MMI objectives.  The loss is always denominator - numerator (minimised).
// Three variants:
//
//   TrueMmi           numerator and denominator are complete graphs; both
//                     terms are full log-sums over alignments.
//   BaselineLatticeMmi  the denominator lattice was determinized once with the
//                     CE model and is only re-scored; the numerator is a
//                     single resolved alignment.
//   OtfMmi            the denominator lattice keeps all alignments and the
//                     best alignment per hypothesis is re-selected under the
//                     current scores on every call.
//
// Gradients are with respect to the acoustic scores a(t, p).  For the
// selection-based variants the selected alignments are held fixed within one
// call.

enum class NumeratorMode { kFixed, kViterbi, kAncestral };

const char *NumeratorModeName(NumeratorMode mode);
/// Accepts "fixed", "viterbi", "ancestral".
NumeratorMode ParseNumeratorMode(const std::string &name);

struct NumeratorSpec {
  NumeratorMode mode = NumeratorMode::kFixed;
  std::optional<Path> fixed_path;                      // mode == kFixed
  std::shared_ptr<const Lattice> numerator_lattice;    // sampled modes

  static NumeratorSpec Fixed(Path path);
  static NumeratorSpec Sampled(NumeratorMode mode,
                               std::shared_ptr<const Lattice> lattice);
};

struct MmiEvaluation {
  double numerator_logprob = 0.0;
  double denominator_logprob = 0.0;
  double loss = 0.0;  // denominator_logprob - numerator_logprob
  PdfMatrix grad;     // d loss / d a(t, p)
  /// The alignment the numerator used (empty for TrueMmi).
  std::optional<Path> numerator_path;
};

/// fixed -> the stored path; viterbi -> best path of the numerator lattice
/// under `scores`; ancestral -> one backward-filtered forward sample drawn
/// with `seed`.  Throws std::invalid_argument on inconsistent specs.
Path ResolveNumerator(const NumeratorSpec &num, const ScoreTable &scores,
                      uint64 seed);

MmiEvaluation TrueMmi(const Lattice &numerator_graph,
                      const Lattice &denominator_graph,
                      const ScoreTable &scores);

/// `den_lattice` holds one alignment per hypothesis (chosen beforehand); the
/// alignments are re-scored under `scores`.
MmiEvaluation BaselineLatticeMmi(const NumeratorSpec &num,
                                 const Lattice &den_lattice,
                                 const ScoreTable &scores, uint64 seed);

/// Same as BaselineLatticeMmi on DeterminizeBestAlignment(raw, scores).
MmiEvaluation OtfMmi(const NumeratorSpec &num, const Lattice &raw_den_lattice,
                     const ScoreTable &scores, uint64 seed);

}  // namespace latmmi

#endif  // LATMMI_MMI_MMI_OBJECTIVES_H_
