// src/toy/decode.cc
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

#include "toy/decode.h"

#include "lat/lattice-algorithms.h"

namespace latmmi {

int32 DecodeSentence(const HypothesisSpace &space, const ScoreTable &scores) {
  int32 best = -1;
  double best_score = kLogZero;
  for (int32 i = 0; i < space.NumSentences(); ++i) {
    const double s = ForwardLogSum(space.SentenceGraph(i), scores);
    if (best < 0 || s > best_score) {
      best = i;
      best_score = s;
    }
  }
  return best;
}

UtteranceDecode DecodeUtterance(const HypothesisSpace &space,
                                const ScorerParams &params,
                                const Utterance &utt) {
  const ScoreTable scores = ScoreFrames(params, utt.features);
  UtteranceDecode d;
  d.error = DecodeSentence(space, scores) != utt.ref_sentence;
  d.true_loss = ForwardLogSum(space.FullGraph(), scores) -
                ForwardLogSum(space.SentenceGraph(utt.ref_sentence), scores);
  return d;
}

}  // namespace latmmi
