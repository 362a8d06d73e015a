// src/toy/lattice-gen.h
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

#ifndef LATMMI_TOY_LATTICE_GEN_H_
#define LATMMI_TOY_LATTICE_GEN_H_

#include <memory>
#include <vector>

#include "lat/lattice.h"
#include "toy/hmm-topology.h"
#include "toy/scorer.h"
#include "toy/synth-data.h"

namespace latmmi {

struct RecognitionResult {
  Lattice raw;               // every alignment of the kept hypotheses
  Lattice det;               // best alignment per kept hypothesis under CE
  std::vector<int32> kept;   // sentence indices, best first
};

/// Keeps the K hypotheses with the highest Viterbi score under `ce_scores`
/// (ties by sentence index).  The reference is always kept: if it misses the
/// top K it replaces the K-th entry.  K larger than the number of hypotheses
/// keeps all of them with a warning.
RecognitionResult RecognitionPass(const HypothesisSpace &space,
                                  const ScoreTable &ce_scores, int32 K,
                                  int32 ref_sentence);

struct NumeratorResult {
  std::shared_ptr<const Lattice> lattice;  // all alignments of W_ref
  Path fixed_path;                         // its Viterbi path under CE
};

NumeratorResult MakeNumerator(const HypothesisSpace &space, int32 ref_sentence,
                              const ScoreTable &ce_scores);

/// Everything pre-generated for one training utterance.
struct UtteranceLattices {
  Lattice raw;
  Lattice det;
  std::shared_ptr<const Lattice> num;
  Path fixed_path;
  std::vector<WordSequence> hypotheses;  // word sequences of `raw`
};

std::vector<UtteranceLattices> MakeLattices(const HypothesisSpace &space,
                                            const std::vector<Utterance> &utts,
                                            const ScorerParams &ce_params,
                                            int32 K);

}  // namespace latmmi

#endif  // LATMMI_TOY_LATTICE_GEN_H_
