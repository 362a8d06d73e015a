// src/toy/decode.h
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

#ifndef LATMMI_TOY_DECODE_H_
#define LATMMI_TOY_DECODE_H_

#include "toy/hmm-topology.h"
#include "toy/scorer.h"
#include "toy/synth-data.h"

namespace latmmi {

/// MAP decision: the sentence with the largest forward score (sum over its
/// alignments, LM included).  Ties go to the lower sentence index.
int32 DecodeSentence(const HypothesisSpace &space, const ScoreTable &scores);

/// Per-utterance decode outcome and true MMI loss under `params`.
struct UtteranceDecode {
  bool error = false;
  double true_loss = 0.0;
};

UtteranceDecode DecodeUtterance(const HypothesisSpace &space,
                                const ScorerParams &params,
                                const Utterance &utt);

}  // namespace latmmi

#endif  // LATMMI_TOY_DECODE_H_
