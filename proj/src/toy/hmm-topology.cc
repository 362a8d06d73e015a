// src/toy/hmm-topology.cc
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

#include "toy/hmm-topology.h"

#include <set>
#include <sstream>
#include <stdexcept>

#include "base/log-math.h"
#include "base/text-utils.h"

namespace latmmi {

void Lexicon::Check() const {
  if (num_phones < 1) throw std::invalid_argument("lexicon has no phones");
  if (word_phones.empty()) throw std::invalid_argument("lexicon has no words");
  for (size_t w = 0; w < word_phones.size(); ++w) {
    if (word_phones[w].empty())
      throw std::invalid_argument("word " + std::to_string(w + 1) +
                                  " has an empty pronunciation");
    for (int32 p : word_phones[w])
      if (p < 1 || p > num_phones)
        throw std::invalid_argument("word " + std::to_string(w + 1) +
                                    " uses unknown phone " + std::to_string(p));
  }
}

Lexicon RandomLexicon(int32 num_words, int32 num_phones,
                      int32 max_phones_per_word, std::mt19937_64 &rng) {
  if (num_words < 1 || num_phones < 1 || max_phones_per_word < 1)
    throw std::invalid_argument("RandomLexicon: sizes must be positive");
  double distinct = 0.0, power = 1.0;
  for (int32 len = 1; len <= max_phones_per_word; ++len) {
    power *= num_phones;
    distinct += power;
  }
  if (distinct < num_words)
    throw std::invalid_argument(
        "RandomLexicon: not enough distinct pronunciations for the vocabulary");
  Lexicon lex;
  lex.num_phones = num_phones;
  std::uniform_int_distribution<int32> len_dist(1, max_phones_per_word);
  std::uniform_int_distribution<int32> phone_dist(1, num_phones);
  std::set<std::vector<int32>> used;
  while (lex.NumWords() < num_words) {
    std::vector<int32> pron(len_dist(rng));
    for (int32 &p : pron) p = phone_dist(rng);
    if (used.insert(pron).second) lex.word_phones.push_back(std::move(pron));
  }
  return lex;
}

HmmTopology RandomTopology(int32 num_phones, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> loop(0.3, 0.7);
  HmmTopology topo;
  topo.self_loop_logprob.resize(num_phones);
  for (auto &phone : topo.self_loop_logprob)
    for (double &lp : phone) lp = std::log(loop(rng));
  return topo;
}

int32 SentenceStates(const WordSequence &words, const Lexicon &lexicon) {
  int32 n = 0;
  for (WordId w : words)
    n += kStatesPerPhone * static_cast<int32>(lexicon.Phones(w).size());
  return n;
}

namespace {

double Binomial(int32 n, int32 k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int32 i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

struct HmmState {
  PdfId pdf;
  double loop;
  double forward;
  WordId ends_word;  // word whose last state this is, else epsilon
};

std::vector<HmmState> SentenceHmm(const WordSequence &words,
                                  const Lexicon &lexicon,
                                  const HmmTopology &topology) {
  std::vector<HmmState> states;
  for (WordId w : words) {
    const auto &phones = lexicon.Phones(w);
    for (size_t i = 0; i < phones.size(); ++i) {
      for (int32 s = 0; s < kStatesPerPhone; ++s) {
        const bool last = i + 1 == phones.size() && s == kStatesPerPhone - 1;
        states.push_back({HmmTopology::Pdf(phones[i], s),
                          topology.LoopLogProb(phones[i], s),
                          topology.ForwardLogProb(phones[i], s),
                          last ? w : kEpsilon});
      }
    }
  }
  return states;
}

}  // namespace

double SentencePathCount(const WordSequence &words, const Lexicon &lexicon,
                         int32 num_frames) {
  const int32 n = SentenceStates(words, lexicon);
  if (n > num_frames) return 0.0;
  return Binomial(num_frames - 1, n - 1);
}

Lattice BuildSentenceGraph(const WordSequence &words, const Lexicon &lexicon,
                           const HmmTopology &topology, double lm_logprob,
                           int32 num_frames) {
  if (words.empty()) throw std::invalid_argument("BuildSentenceGraph: empty sentence");
  for (WordId w : words)
    if (w < 1 || w > lexicon.NumWords())
      throw std::invalid_argument("BuildSentenceGraph: unknown word " +
                                  std::to_string(w));
  const std::vector<HmmState> hmm = SentenceHmm(words, lexicon, topology);
  const int32 n = static_cast<int32>(hmm.size());
  const int32 T = num_frames;
  if (n > T)
    throw std::invalid_argument(
        "BuildSentenceGraph: sentence '" + WordSequenceToString(words) +
        "' needs " + std::to_string(n) + " frames, only " + std::to_string(T) +
        " available");

  // id[t][k] for t in 1..T and HMM state k in 1..n; state 0 is the start.
  auto reachable = [&](int32 t, int32 k) { return k <= t && n - k <= T - t; };
  std::vector<std::vector<StateId>> id(T + 1, std::vector<StateId>(n + 1, -1));
  std::vector<int32> frames{0};
  for (int32 t = 1; t <= T; ++t)
    for (int32 k = 1; k <= n; ++k)
      if (reachable(t, k)) {
        id[t][k] = static_cast<StateId>(frames.size());
        frames.push_back(t);
      }

  auto enter_arc = [&](StateId src, StateId dst, int32 k, double trans) {
    const HmmState &st = hmm[k - 1];
    Arc arc{src, dst, st.pdf, st.ends_word, trans};
    if (k == n) arc.graph_weight += lm_logprob;
    return arc;
  };

  std::vector<Arc> arcs;
  arcs.push_back(enter_arc(0, id[1][1], 1, 0.0));
  for (int32 t = 1; t < T; ++t) {
    for (int32 k = 1; k <= n; ++k) {
      if (id[t][k] < 0) continue;
      if (reachable(t + 1, k))
        arcs.push_back({id[t][k], id[t + 1][k], hmm[k - 1].pdf, kEpsilon,
                        hmm[k - 1].loop});
      if (k < n && reachable(t + 1, k + 1))
        arcs.push_back(enter_arc(id[t][k], id[t + 1][k + 1], k + 1,
                                 hmm[k - 1].forward));
    }
  }
  return Lattice(T, std::move(frames), 0, {id[T][n]}, std::move(arcs));
}

double HypothesisSpace::CountFullGraphPaths(const Lexicon &lexicon,
                                            int32 num_frames, int32 max_len) {
  double total = 0.0;
  std::vector<WordSequence> frontier{{}};
  for (int32 len = 1; len <= max_len; ++len) {
    std::vector<WordSequence> next;
    for (const auto &prefix : frontier) {
      for (WordId w = 1; w <= lexicon.NumWords(); ++w) {
        WordSequence s = prefix;
        s.push_back(w);
        if (SentenceStates(s, lexicon) > num_frames) continue;
        total += SentencePathCount(s, lexicon, num_frames);
        next.push_back(std::move(s));
      }
    }
    frontier = std::move(next);
  }
  return total;
}

HypothesisSpace HypothesisSpace::Build(const Lexicon &lexicon,
                                       const HmmTopology &topology,
                                       const std::map<WordSequence, double> &lm,
                                       int32 num_frames, int32 max_len,
                                       double path_cap) {
  lexicon.Check();
  if (topology.NumPhones() != lexicon.num_phones)
    throw std::invalid_argument("HypothesisSpace: topology/lexicon phone mismatch");
  if (num_frames < 1 || max_len < 1)
    throw std::invalid_argument("HypothesisSpace: frames and max_len must be >= 1");
  const double count = CountFullGraphPaths(lexicon, num_frames, max_len);
  if (count > path_cap) {
    std::ostringstream os;
    os << "hypothesis graph has " << FormatScore(count)
       << " paths, more than the enumeration cap of " << FormatScore(path_cap);
    throw std::length_error(os.str());
  }

  HypothesisSpace space;
  space.lexicon_ = lexicon;
  space.topology_ = topology;
  space.num_frames_ = num_frames;
  space.full_path_count_ = count;

  // Sentences of length 1, then 2, ...; lexicographic within a length.
  std::vector<WordSequence> frontier{{}};
  for (int32 len = 1; len <= max_len; ++len) {
    std::vector<WordSequence> next;
    for (const auto &prefix : frontier) {
      for (WordId w = 1; w <= lexicon.NumWords(); ++w) {
        WordSequence s = prefix;
        s.push_back(w);
        if (SentenceStates(s, lexicon) > num_frames) continue;
        space.sentences_.push_back(s);
        next.push_back(std::move(s));
      }
    }
    frontier = std::move(next);
  }
  if (space.sentences_.empty())
    throw std::invalid_argument("HypothesisSpace: no sentence fits in " +
                                std::to_string(num_frames) + " frames");

  std::vector<double> raw;
  for (const auto &s : space.sentences_) {
    auto it = lm.find(s);
    raw.push_back(it == lm.end() ? 0.0 : it->second);
  }
  const double norm = LogSumExp(raw);
  for (size_t i = 0; i < raw.size(); ++i) {
    space.lm_logprob_.push_back(raw[i] - norm);
    space.index_.emplace(space.sentences_[i], static_cast<int32>(i));
  }
  for (size_t i = 0; i < space.sentences_.size(); ++i)
    space.sentence_graphs_.push_back(BuildSentenceGraph(
        space.sentences_[i], lexicon, topology, space.lm_logprob_[i], num_frames));
  std::vector<int32> all(space.sentences_.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int32>(i);
  space.full_graph_ = space.UnionGraph(all);
  return space;
}

int32 HypothesisSpace::IndexOf(const WordSequence &words) const {
  auto it = index_.find(words);
  return it == index_.end() ? -1 : it->second;
}

Lattice HypothesisSpace::UnionGraph(const std::vector<int32> &sentence_indices) const {
  std::vector<int32> frames{0};
  std::vector<StateId> finals;
  std::vector<Arc> arcs;
  for (int32 i : sentence_indices) {
    const Lattice &g = sentence_graphs_.at(i);
    // Sentence state s > 0 maps to offset + s; its start maps to 0.
    const StateId offset = static_cast<StateId>(frames.size()) - 1;
    for (StateId s = 1; s < g.NumStates(); ++s) frames.push_back(g.Frame(s));
    auto map = [&](StateId s) { return s == g.Start() ? 0 : offset + s; };
    for (const Arc &arc : g.Arcs()) {
      Arc a = arc;
      a.src = map(arc.src);
      a.dst = map(arc.dst);
      arcs.push_back(a);
    }
    for (StateId f : g.Finals()) finals.push_back(map(f));
  }
  return Lattice(num_frames_, std::move(frames), 0, std::move(finals),
                 std::move(arcs));
}

}  // namespace latmmi
