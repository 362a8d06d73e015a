// src/toy/hmm-topology.h
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

#ifndef LATMMI_TOY_HMM_TOPOLOGY_H_
#define LATMMI_TOY_HMM_TOPOLOGY_H_

#include <array>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "lat/lattice.h"

namespace latmmi {

inline constexpr int32 kStatesPerPhone = 3;

struct Lexicon {
  int32 num_phones = 0;
  /// word_phones[w - 1] is the (1-based) phone sequence of word w.
  std::vector<std::vector<int32>> word_phones;

  int32 NumWords() const { return static_cast<int32>(word_phones.size()); }
  const std::vector<int32> &Phones(WordId w) const { return word_phones.at(w - 1); }
  /// Throws std::invalid_argument on empty pronunciations or bad phone ids.
  void Check() const;
};

/// Left-to-right 3-state phone HMMs with self-loops; one pdf per
/// (phone, state), so P = 3 * num_phones.
struct HmmTopology {
  /// self_loop_logprob[phone - 1][state]; the forward transition gets
  /// log(1 - exp(loop)).
  std::vector<std::array<double, kStatesPerPhone>> self_loop_logprob;

  int32 NumPhones() const { return static_cast<int32>(self_loop_logprob.size()); }
  int32 NumPdfs() const { return kStatesPerPhone * NumPhones(); }
  static PdfId Pdf(int32 phone, int32 state) {
    return kStatesPerPhone * (phone - 1) + state + 1;
  }
  double LoopLogProb(int32 phone, int32 state) const {
    return self_loop_logprob[phone - 1][state];
  }
  double ForwardLogProb(int32 phone, int32 state) const {
    return std::log1p(-std::exp(self_loop_logprob[phone - 1][state]));
  }
};

Lexicon RandomLexicon(int32 num_words, int32 num_phones,
                      int32 max_phones_per_word, std::mt19937_64 &rng);
HmmTopology RandomTopology(int32 num_phones, std::mt19937_64 &rng);

/// Number of HMM states of the sentence; also its minimum frame count.
int32 SentenceStates(const WordSequence &words, const Lexicon &lexicon);

/// Number of alignments of the sentence over T frames, C(T-1, N-1).
double SentencePathCount(const WordSequence &words, const Lexicon &lexicon,
                         int32 num_frames);

/// Unrolls the concatenated phone HMMs of `words` over exactly `num_frames`
/// frames.  Lattice state (t, k) means "HMM state k occupied at frame t-1".
/// The arc that first enters the last HMM state of a word carries the word
/// label; the one entering the sentence's last state also carries
/// `lm_logprob`.  Throws std::invalid_argument if the sentence needs more
/// frames than available.
Lattice BuildSentenceGraph(const WordSequence &words, const Lexicon &lexicon,
                           const HmmTopology &topology, double lm_logprob,
                           int32 num_frames);

/// The complete hypothesis space of one utterance length: every sentence of
/// up to max_len words that fits in T frames, with a normalized sentence LM.
class HypothesisSpace {
 public:
  HypothesisSpace() = default;

  /// `lm` gives unnormalized log weights; sentences missing from `lm` get
  /// weight 0 (log 1).  Throws std::length_error, carrying the computed path
  /// count, if the full graph would exceed `path_cap` paths.
  static HypothesisSpace Build(const Lexicon &lexicon,
                               const HmmTopology &topology,
                               const std::map<WordSequence, double> &lm,
                               int32 num_frames, int32 max_len,
                               double path_cap = 1e6);

  /// Total path count of the full graph for a configuration, without
  /// building anything.
  static double CountFullGraphPaths(const Lexicon &lexicon, int32 num_frames,
                                    int32 max_len);

  const Lexicon &GetLexicon() const { return lexicon_; }
  const HmmTopology &Topology() const { return topology_; }
  int32 NumFrames() const { return num_frames_; }
  int32 NumPdfs() const { return topology_.NumPdfs(); }
  int32 NumSentences() const { return static_cast<int32>(sentences_.size()); }
  const WordSequence &Sentence(int32 i) const { return sentences_[i]; }
  const std::vector<WordSequence> &Sentences() const { return sentences_; }
  double LmLogProb(int32 i) const { return lm_logprob_[i]; }
  /// -1 if the word sequence is not in the space.
  int32 IndexOf(const WordSequence &words) const;

  const Lattice &SentenceGraph(int32 i) const { return sentence_graphs_[i]; }
  const Lattice &FullGraph() const { return full_graph_; }
  double FullGraphPathCount() const { return full_path_count_; }

  /// Union of the given sentences' graphs sharing one start state.
  Lattice UnionGraph(const std::vector<int32> &sentence_indices) const;

 private:
  Lexicon lexicon_;
  HmmTopology topology_;
  int32 num_frames_ = 0;
  std::vector<WordSequence> sentences_;
  std::vector<double> lm_logprob_;
  std::map<WordSequence, int32> index_;
  std::vector<Lattice> sentence_graphs_;
  Lattice full_graph_;
  double full_path_count_ = 0.0;
};

}  // namespace latmmi

#endif  // LATMMI_TOY_HMM_TOPOLOGY_H_
