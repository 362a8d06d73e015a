// src/toy/lattice-gen.cc
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

#include "toy/lattice-gen.h"

#include <algorithm>
#include <stdexcept>

#include "base/logging.h"
#include "lat/lattice-algorithms.h"

namespace latmmi {

RecognitionResult RecognitionPass(const HypothesisSpace &space,
                                  const ScoreTable &ce_scores, int32 K,
                                  int32 ref_sentence) {
  if (K < 1) throw std::invalid_argument("RecognitionPass: K must be >= 1");
  if (ref_sentence < 0 || ref_sentence >= space.NumSentences())
    throw std::invalid_argument("RecognitionPass: bad reference sentence");
  const int32 n = space.NumSentences();
  if (K > n) {
    LATMMI_WARN("RecognitionPass: K=" << K << " exceeds the " << n
                << " hypotheses; keeping all");
    K = n;
  }
  // Per-hypothesis Viterbi scores; the full graph is a disjoint union of
  // sentence graphs, so this equals the best-alignment-per-word-sequence
  // scores of the full graph.
  std::vector<std::pair<double, int32>> ranked;
  ranked.reserve(n);
  for (int32 i = 0; i < n; ++i)
    ranked.emplace_back(ViterbiBestPath(space.SentenceGraph(i), ce_scores).score, i);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto &a, const auto &b) { return a.first > b.first; });

  RecognitionResult r;
  for (int32 i = 0; i < K; ++i) r.kept.push_back(ranked[i].second);
  if (std::find(r.kept.begin(), r.kept.end(), ref_sentence) == r.kept.end())
    r.kept.back() = ref_sentence;
  r.raw = space.UnionGraph(r.kept);
  r.det = DeterminizeBestAlignment(r.raw, ce_scores);
  return r;
}

NumeratorResult MakeNumerator(const HypothesisSpace &space, int32 ref_sentence,
                              const ScoreTable &ce_scores) {
  NumeratorResult r;
  r.lattice = std::make_shared<const Lattice>(space.SentenceGraph(ref_sentence));
  r.fixed_path = ViterbiBestPath(*r.lattice, ce_scores).path;
  return r;
}

std::vector<UtteranceLattices> MakeLattices(const HypothesisSpace &space,
                                            const std::vector<Utterance> &utts,
                                            const ScorerParams &ce_params,
                                            int32 K) {
  std::vector<UtteranceLattices> out;
  out.reserve(utts.size());
  for (const Utterance &utt : utts) {
    const ScoreTable ce_scores = ScoreFrames(ce_params, utt.features);
    RecognitionResult rec = RecognitionPass(space, ce_scores, K, utt.ref_sentence);
    NumeratorResult num = MakeNumerator(space, utt.ref_sentence, ce_scores);
    UtteranceLattices lat;
    lat.raw = std::move(rec.raw);
    lat.det = std::move(rec.det);
    lat.num = std::move(num.lattice);
    lat.fixed_path = std::move(num.fixed_path);
    for (int32 i : rec.kept) lat.hypotheses.push_back(space.Sentence(i));
    std::sort(lat.hypotheses.begin(), lat.hypotheses.end());
    out.push_back(std::move(lat));
  }
  return out;
}

}  // namespace latmmi
