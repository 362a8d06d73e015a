// src/lat/lattice-algorithms.cc
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

#include "lat/lattice-algorithms.h"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "base/text-utils.h"

namespace latmmi {

namespace {

inline double ArcWeight(const Lattice &lat, const ScoreTable &scores,
                        const Arc &arc) {
  return scores(lat.Frame(arc.src), arc.pdf) + arc.graph_weight;
}

std::vector<StateId> SortedFinals(const Lattice &lat) {
  std::vector<StateId> finals = lat.Finals();
  std::sort(finals.begin(), finals.end());
  return finals;
}

// Interns word-sequence prefixes; id 0 is the empty prefix.
class PrefixTrie {
 public:
  PrefixTrie() { nodes_.push_back({-1, kEpsilon}); }

  int32 Extend(int32 prefix, WordId word) {
    auto [it, inserted] =
        index_.try_emplace({prefix, word}, static_cast<int32>(nodes_.size()));
    if (inserted) nodes_.push_back({prefix, word});
    return it->second;
  }

  WordSequence Sequence(int32 prefix) const {
    WordSequence words;
    for (; prefix > 0; prefix = nodes_[prefix].first)
      words.push_back(nodes_[prefix].second);
    std::reverse(words.begin(), words.end());
    return words;
  }

 private:
  std::vector<std::pair<int32, WordId>> nodes_;
  std::map<std::pair<int32, WordId>, int32> index_;
};

}  // namespace

void CheckCompatible(const Lattice &lattice, const ScoreTable &scores,
                     const char *context) {
  lattice.RequireValid(context);
  if (scores.NumFrames() != lattice.NumFrames())
    throw std::invalid_argument(
        std::string(context) + ": score table has " +
        std::to_string(scores.NumFrames()) + " frames, lattice has " +
        std::to_string(lattice.NumFrames()));
  if (lattice.MaxPdf() > scores.NumPdfs())
    throw std::invalid_argument(
        std::string(context) + ": lattice uses pdf " +
        std::to_string(lattice.MaxPdf()) + " but the score table has " +
        std::to_string(scores.NumPdfs()) + " columns");
}

std::vector<double> ForwardScores(const Lattice &lattice,
                                  const ScoreTable &scores) {
  CheckCompatible(lattice, scores, "ForwardScores");
  std::vector<double> alpha(lattice.NumStates(), kLogZero);
  alpha[lattice.Start()] = 0.0;
  for (int32 t = 1; t <= lattice.NumFrames(); ++t) {
    for (StateId s : lattice.StatesAtFrame(t)) {
      double acc = kLogZero;
      for (int32 a : lattice.InArcs(s)) {
        const Arc &arc = lattice.GetArc(a);
        acc = LogAdd(acc, alpha[arc.src] + ArcWeight(lattice, scores, arc));
      }
      alpha[s] = acc;
    }
  }
  return alpha;
}

double ForwardLogSum(const Lattice &lattice, const ScoreTable &scores) {
  std::vector<double> alpha = ForwardScores(lattice, scores);
  double total = kLogZero;
  for (StateId f : SortedFinals(lattice)) total = LogAdd(total, alpha[f]);
  if (total == kLogZero)
    throw std::invalid_argument("ForwardLogSum: lattice has no complete path");
  return total;
}

BackwardTable BackwardFill(const Lattice &lattice, const ScoreTable &scores) {
  CheckCompatible(lattice, scores, "BackwardFill");
  BackwardTable table;
  table.beta.assign(lattice.NumStates(), kLogZero);
  for (StateId f : lattice.Finals()) table.beta[f] = 0.0;
  for (int32 t = lattice.NumFrames() - 1; t >= 0; --t) {
    for (StateId s : lattice.StatesAtFrame(t)) {
      double acc = kLogZero;
      for (int32 a : lattice.OutArcs(s)) {
        const Arc &arc = lattice.GetArc(a);
        acc = LogAdd(acc, ArcWeight(lattice, scores, arc) + table.beta[arc.dst]);
      }
      table.beta[s] = acc;
    }
  }
  if (table.beta[lattice.Start()] == kLogZero)
    throw std::invalid_argument("BackwardFill: lattice has no complete path");
  return table;
}

ScoredPath ViterbiBestPath(const Lattice &lattice, const ScoreTable &scores) {
  CheckCompatible(lattice, scores, "ViterbiBestPath");
  const int32 n = lattice.NumStates();
  std::vector<double> delta(n, kLogZero);
  std::vector<int32> back(n, -1);
  delta[lattice.Start()] = 0.0;
  for (int32 t = 1; t <= lattice.NumFrames(); ++t) {
    for (StateId s : lattice.StatesAtFrame(t)) {
      for (int32 a : lattice.InArcs(s)) {
        const Arc &arc = lattice.GetArc(a);
        double cand = delta[arc.src] + ArcWeight(lattice, scores, arc);
        if (back[s] < 0 || cand > delta[s]) {
          delta[s] = cand;
          back[s] = a;
        }
      }
    }
  }
  StateId best_final = -1;
  for (StateId f : SortedFinals(lattice))
    if (best_final < 0 || delta[f] > delta[best_final]) best_final = f;
  if (best_final < 0 || delta[best_final] == kLogZero)
    throw std::invalid_argument("ViterbiBestPath: lattice has no complete path");

  std::vector<int32> arc_ids;
  for (StateId s = best_final; s != lattice.Start();
       s = lattice.GetArc(back[s]).src)
    arc_ids.push_back(back[s]);
  std::reverse(arc_ids.begin(), arc_ids.end());
  return {MakePath(lattice, std::move(arc_ids)), delta[best_final]};
}

bool ViterbiTieLess(const Path &a, const Path &b) {
  if (a.arcs.empty() || b.arcs.empty()) return a.arcs.size() < b.arcs.size();
  if (a.arcs.back().dst != b.arcs.back().dst)
    return a.arcs.back().dst < b.arcs.back().dst;
  const size_t n = std::min(a.arc_ids.size(), b.arc_ids.size());
  for (size_t i = 1; i <= n; ++i) {
    const size_t ia = a.arc_ids.size() - i, ib = b.arc_ids.size() - i;
    if (a.arcs[ia].src != b.arcs[ib].src) return a.arcs[ia].src < b.arcs[ib].src;
    if (a.arc_ids[ia] != b.arc_ids[ib]) return a.arc_ids[ia] < b.arc_ids[ib];
  }
  return a.arc_ids.size() < b.arc_ids.size();
}

std::vector<WordSequenceBest> BestAlignmentPerWordSequence(
    const Lattice &lattice, const ScoreTable &scores) {
  CheckCompatible(lattice, scores, "BestAlignmentPerWordSequence");
  struct Entry {
    double score;
    int32 arc;         // incoming arc, -1 at the start state
    int32 src_prefix;  // prefix id at the arc's source state
  };
  PrefixTrie trie;
  // Per state: prefix id -> best partial alignment with that word prefix.
  std::vector<std::map<int32, Entry>> table(lattice.NumStates());
  table[lattice.Start()].emplace(0, Entry{0.0, -1, -1});

  for (int32 t = 1; t <= lattice.NumFrames(); ++t) {
    for (StateId s : lattice.StatesAtFrame(t)) {
      auto &cell = table[s];
      for (int32 a : lattice.InArcs(s)) {
        const Arc &arc = lattice.GetArc(a);
        const double w = ArcWeight(lattice, scores, arc);
        for (const auto &[prefix, entry] : table[arc.src]) {
          int32 next = arc.word == kEpsilon ? prefix : trie.Extend(prefix, arc.word);
          double cand = entry.score + w;
          auto [it, inserted] = cell.try_emplace(next, Entry{cand, a, prefix});
          if (!inserted && cand > it->second.score) it->second = {cand, a, prefix};
        }
      }
    }
  }

  // Complete word sequence -> (score, final state).
  std::map<int32, std::pair<double, StateId>> best;
  for (StateId f : SortedFinals(lattice)) {
    for (const auto &[prefix, entry] : table[f]) {
      auto [it, inserted] = best.try_emplace(prefix, entry.score, f);
      if (!inserted && entry.score > it->second.first)
        it->second = {entry.score, f};
    }
  }

  std::vector<WordSequenceBest> out;
  out.reserve(best.size());
  for (const auto &[prefix, sf] : best) {
    std::vector<int32> arc_ids;
    StateId s = sf.second;
    int32 p = prefix;
    while (s != lattice.Start()) {
      const Entry &e = table[s].at(p);
      arc_ids.push_back(e.arc);
      p = e.src_prefix;
      s = lattice.GetArc(e.arc).src;
    }
    std::reverse(arc_ids.begin(), arc_ids.end());
    WordSequenceBest item;
    item.words = trie.Sequence(prefix);
    item.best.path = MakePath(lattice, std::move(arc_ids));
    item.best.score = sf.first;
    out.push_back(std::move(item));
  }
  std::sort(out.begin(), out.end(),
            [](const WordSequenceBest &x, const WordSequenceBest &y) {
              return x.words < y.words;
            });
  return out;
}

Lattice PathsToLattice(int32 num_frames, const std::vector<Path> &paths) {
  std::vector<int32> frames{0};
  std::vector<Arc> arcs;
  std::vector<StateId> finals;
  std::map<std::pair<StateId, int32>, StateId> child;  // (state, src arc) -> state
  for (const Path &path : paths) {
    if (path.NumFrames() != num_frames ||
        path.arc_ids.size() != path.arcs.size())
      throw std::invalid_argument("PathsToLattice: path length mismatch");
    StateId cur = 0;
    for (int32 t = 0; t < num_frames; ++t) {
      auto [it, inserted] =
          child.try_emplace({cur, path.arc_ids[t]}, static_cast<StateId>(frames.size()));
      if (inserted) {
        frames.push_back(t + 1);
        Arc arc = path.arcs[t];
        arc.src = cur;
        arc.dst = it->second;
        arcs.push_back(arc);
      }
      cur = it->second;
    }
    if (std::find(finals.begin(), finals.end(), cur) == finals.end())
      finals.push_back(cur);
  }
  return Lattice(num_frames, std::move(frames), 0, std::move(finals),
                 std::move(arcs));
}

Lattice DeterminizeBestAlignment(const Lattice &lattice,
                                 const ScoreTable &scores) {
  std::vector<WordSequenceBest> best =
      BestAlignmentPerWordSequence(lattice, scores);
  std::vector<Path> paths;
  paths.reserve(best.size());
  for (auto &item : best) paths.push_back(std::move(item.best.path));
  return PathsToLattice(lattice.NumFrames(), paths);
}

AncestralSampler::AncestralSampler(const Lattice &lattice,
                                   const ScoreTable &scores,
                                   const BackwardTable &beta)
    : lattice_(lattice), scores_(scores), beta_(beta) {
  CheckCompatible(lattice, scores, "AncestralSampler");
  if (beta.beta.size() != static_cast<size_t>(lattice.NumStates()))
    throw std::invalid_argument(
        "AncestralSampler: backward table does not match the lattice");
  const double total = ForwardLogSum(lattice, scores);
  if (!(std::abs(beta.Total(lattice) - total) <= 1e-9 * std::max(1.0, std::abs(total))))
    throw std::invalid_argument(
        "AncestralSampler: stale backward table (beta(start) = " +
        FormatScore(beta.Total(lattice)) + ", forward total = " +
        FormatScore(total) + ")");
}

Path AncestralSampler::Sample(std::mt19937_64 &rng) const {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<int32> arc_ids;
  arc_ids.reserve(lattice_.NumFrames());
  StateId s = lattice_.Start();
  std::vector<double> probs;
  while (!lattice_.IsFinal(s)) {
    auto out = lattice_.OutArcs(s);
    probs.resize(out.size());
    double sum = 0.0;
    for (size_t i = 0; i < out.size(); ++i) {
      const Arc &arc = lattice_.GetArc(out[i]);
      probs[i] = std::exp(ArcWeight(lattice_, scores_, arc) +
                          beta_.beta[arc.dst] - beta_.beta[s]);
      sum += probs[i];
    }
    const double err = std::abs(sum - 1.0);
    max_local_error_ = std::max(max_local_error_, err);
    if (err > 1e-9)
      throw std::invalid_argument(
          "AncestralSampler: backward table inconsistent at state " +
          std::to_string(s));
    const double u = uniform(rng) * sum;
    double cum = 0.0;
    size_t pick = out.size() - 1;
    for (size_t i = 0; i < out.size(); ++i) {
      cum += probs[i];
      if (u < cum) {
        pick = i;
        break;
      }
    }
    arc_ids.push_back(out[pick]);
    s = lattice_.GetArc(out[pick]).dst;
  }
  return MakePath(lattice_, std::move(arc_ids));
}

Path AncestralSample(const Lattice &lattice, const ScoreTable &scores,
                     const BackwardTable &beta, uint64 seed) {
  AncestralSampler sampler(lattice, scores, beta);
  std::mt19937_64 rng(seed);
  return sampler.Sample(rng);
}

double CountPaths(const Lattice &lattice) {
  lattice.RequireValid("CountPaths");
  std::vector<double> count(lattice.NumStates(), 0.0);
  count[lattice.Start()] = 1.0;
  for (int32 t = 1; t <= lattice.NumFrames(); ++t)
    for (StateId s : lattice.StatesAtFrame(t))
      for (int32 a : lattice.InArcs(s)) count[s] += count[lattice.GetArc(a).src];
  double total = 0.0;
  for (StateId f : lattice.Finals()) total += count[f];
  return total;
}

std::vector<ScoredPath> EnumeratePaths(const Lattice &lattice,
                                       const ScoreTable &scores,
                                       double max_paths) {
  CheckCompatible(lattice, scores, "EnumeratePaths");
  const double count = CountPaths(lattice);
  if (count > max_paths) {
    std::ostringstream os;
    os << "EnumeratePaths: lattice has " << FormatScore(count)
       << " paths, more than the cap of " << FormatScore(max_paths);
    throw std::length_error(os.str());
  }
  std::vector<ScoredPath> out;
  out.reserve(static_cast<size_t>(count));
  // Iterative DFS; cursor[d] indexes into OutArcs of the depth-d state.
  std::vector<int32> arc_stack;
  std::vector<size_t> cursor{0};
  std::vector<StateId> state_stack{lattice.Start()};
  while (!state_stack.empty()) {
    StateId s = state_stack.back();
    if (lattice.IsFinal(s) && cursor.back() == 0) {
      Path path = MakePath(lattice, arc_stack);
      double score = PathScore(path, scores);
      out.push_back({std::move(path), score});
    }
    auto outs = lattice.OutArcs(s);
    if (cursor.back() < outs.size()) {
      int32 a = outs[cursor.back()++];
      arc_stack.push_back(a);
      state_stack.push_back(lattice.GetArc(a).dst);
      cursor.push_back(0);
    } else {
      state_stack.pop_back();
      cursor.pop_back();
      if (!arc_stack.empty()) arc_stack.pop_back();
    }
  }
  return out;
}

OccupancyTable OccupanciesFromTables(const Lattice &lattice,
                                     const ScoreTable &scores,
                                     const std::vector<double> &alpha,
                                     const std::vector<double> &beta,
                                     double total) {
  OccupancyTable gamma(scores.NumFrames(), scores.NumPdfs(), 0.0);
  for (const Arc &arc : lattice.Arcs()) {
    const double post = std::exp(alpha[arc.src] + ArcWeight(lattice, scores, arc) +
                                 beta[arc.dst] - total);
    gamma(lattice.Frame(arc.src), arc.pdf) += post;
  }
  return gamma;
}

OccupancyTable Occupancies(const Lattice &lattice, const ScoreTable &scores) {
  std::vector<double> alpha = ForwardScores(lattice, scores);
  BackwardTable bt = BackwardFill(lattice, scores);
  return OccupanciesFromTables(lattice, scores, alpha, bt.beta,
                               bt.Total(lattice));
}

bool FindMatchingPath(const Lattice &lattice, const std::vector<PdfId> &pdfs,
                      const WordSequence &words, Path *out) {
  lattice.RequireValid("FindMatchingPath");
  if (static_cast<int32>(pdfs.size()) != lattice.NumFrames()) return false;
  std::vector<int32> arc_stack;
  // Depth-first search with explicit backtracking.
  struct Frame {
    StateId state;
    size_t next;
    size_t words_done;
  };
  std::vector<Frame> stack{{lattice.Start(), 0, 0}};
  while (!stack.empty()) {
    Frame &top = stack.back();
    const size_t t = stack.size() - 1;
    if (t == pdfs.size()) {
      if (lattice.IsFinal(top.state) && top.words_done == words.size()) {
        if (out) *out = MakePath(lattice, arc_stack);
        return true;
      }
      stack.pop_back();
      if (!arc_stack.empty()) arc_stack.pop_back();
      continue;
    }
    auto outs = lattice.OutArcs(top.state);
    bool pushed = false;
    while (top.next < outs.size()) {
      int32 a = outs[top.next++];
      const Arc &arc = lattice.GetArc(a);
      if (arc.pdf != pdfs[t]) continue;
      size_t done = top.words_done;
      if (arc.word != kEpsilon) {
        if (done >= words.size() || words[done] != arc.word) continue;
        ++done;
      }
      arc_stack.push_back(a);
      stack.push_back({arc.dst, 0, done});
      pushed = true;
      break;
    }
    if (!pushed) {
      stack.pop_back();
      if (!arc_stack.empty()) arc_stack.pop_back();
    }
  }
  return false;
}

std::string FormatPathLine(const Path &path, double score) {
  std::ostringstream os;
  os << "path " << FormatScore(score);
  for (PdfId p : path.pdfs) os << ' ' << p;
  os << " |";
  for (WordId w : path.words) os << ' ' << w;
  return os.str();
}

}  // namespace latmmi
