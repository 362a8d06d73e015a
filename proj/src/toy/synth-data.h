// src/toy/synth-data.h
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

#ifndef LATMMI_TOY_SYNTH_DATA_H_
#define LATMMI_TOY_SYNTH_DATA_H_

#include <vector>

#include "toy/hmm-topology.h"
#include "toy/scorer.h"

namespace latmmi {

struct SynthConfig {
  int32 vocab_size = 5;
  int32 num_phones = 4;
  int32 max_phones_per_word = 2;
  int32 max_sentence_len = 2;
  int32 frames = 10;
  int32 feature_dim = 4;
  double noise = 1.25;          // feature noise standard deviation
  double template_scale = 1.0;  // spread of the per-pdf feature means
  double lm_spread = 1.0;       // std-dev of the sentence LM log weights
  int32 num_train = 128;
  int32 num_dev = 100;
  int32 num_test = 1000;
  double enumeration_cap = 1e6;
  uint64 seed = 1;

  /// Throws std::invalid_argument on non-positive sizes or negative noise.
  void Check() const;
};

struct Utterance {
  int32 id = 0;
  FeatureMatrix features;  // T x F
  WordSequence ref_words;
  int32 ref_sentence = -1;  // index into the hypothesis space
  Path true_alignment;      // a path of the reference sentence graph
};

/// Lexicon, topology, sentence LM and feature templates, all drawn from the
/// config seed.
struct ToyTask {
  SynthConfig config;
  HypothesisSpace space;
  Eigen::MatrixXd templates;  // P x F; row p - 1 is the mean of pdf p
};

ToyTask MakeToyTask(const SynthConfig &config);

/// Samples `count` utterances: a sentence from the LM, an alignment from the
/// topology conditioned on T frames, and template-plus-noise features.
/// Deterministic in (task, seed).  Sentences longer than T never occur since
/// the hypothesis space only contains sentences that fit.
std::vector<Utterance> SynthDataset(const ToyTask &task, int32 count,
                                    uint64 seed);

struct ToyDatasets {
  std::vector<Utterance> train, dev, test;
};

/// Train/dev/test sets on independent seed streams of the config seed.
ToyDatasets SynthAll(const ToyTask &task);

}  // namespace latmmi

#endif  // LATMMI_TOY_SYNTH_DATA_H_
