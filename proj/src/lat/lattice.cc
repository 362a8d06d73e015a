// src/lat/lattice.cc
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

#include "lat/lattice.h"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace latmmi {

PdfMatrix::PdfMatrix(int32 num_frames, int32 num_pdfs, double fill)
    : num_frames_(num_frames),
      num_pdfs_(num_pdfs),
      data_(static_cast<size_t>(num_frames) * num_pdfs, fill) {
  if (num_frames < 0 || num_pdfs < 0)
    throw std::invalid_argument("PdfMatrix: negative dimension");
}

PdfMatrix::PdfMatrix(int32 num_frames, int32 num_pdfs,
                     std::vector<double> row_major)
    : num_frames_(num_frames), num_pdfs_(num_pdfs), data_(std::move(row_major)) {
  if (num_frames < 0 || num_pdfs < 0 ||
      data_.size() != static_cast<size_t>(num_frames) * num_pdfs)
    throw std::invalid_argument("PdfMatrix: data size does not match T x P");
}

bool PdfMatrix::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

void CheckScoreTable(const ScoreTable &scores) {
  if (!scores.AllFinite())
    throw std::invalid_argument("score table contains non-finite entries");
}

const char *ViolationKindName(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::kFrameRange: return "frame-range";
    case Violation::Kind::kFrameStep: return "frame-step";
    case Violation::Kind::kBadStateRef: return "state-ref";
    case Violation::Kind::kStart: return "start";
    case Violation::Kind::kFinal: return "final";
    case Violation::Kind::kConnectivity: return "connectivity";
    case Violation::Kind::kLabel: return "label";
    case Violation::Kind::kWeight: return "weight";
    case Violation::Kind::kDuplicateState: return "duplicate-state";
  }
  return "unknown";
}

Lattice::Lattice(int32 num_frames, std::vector<int32> state_frames,
                 StateId start, std::vector<StateId> finals,
                 std::vector<Arc> arcs)
    : num_frames_(num_frames),
      state_frames_(std::move(state_frames)),
      start_(start),
      finals_(std::move(finals)),
      arcs_(std::move(arcs)) {
  BuildIndex();
  Validate();
}

void Lattice::BuildIndex() {
  const int32 n = NumStates();
  auto in_range = [n](StateId s) { return s >= 0 && s < n; };

  is_final_.assign(n, 0);
  for (StateId f : finals_)
    if (in_range(f)) is_final_[f] = 1;

  out_offsets_.assign(n + 1, 0);
  in_offsets_.assign(n + 1, 0);
  for (const Arc &arc : arcs_) {
    if (!in_range(arc.src) || !in_range(arc.dst)) continue;
    ++out_offsets_[arc.src + 1];
    ++in_offsets_[arc.dst + 1];
  }
  std::partial_sum(out_offsets_.begin(), out_offsets_.end(),
                   out_offsets_.begin());
  std::partial_sum(in_offsets_.begin(), in_offsets_.end(), in_offsets_.begin());
  out_arcs_.assign(out_offsets_.back(), 0);
  in_arcs_.assign(in_offsets_.back(), 0);
  std::vector<int32> out_fill(out_offsets_.begin(), out_offsets_.end() - 1);
  std::vector<int32> in_fill(in_offsets_.begin(), in_offsets_.end() - 1);
  for (int32 a = 0; a < NumArcs(); ++a) {
    const Arc &arc = arcs_[a];
    if (!in_range(arc.src) || !in_range(arc.dst)) continue;
    out_arcs_[out_fill[arc.src]++] = a;
    in_arcs_[in_fill[arc.dst]++] = a;
  }
  for (StateId s = 0; s < n; ++s) {
    auto begin = in_arcs_.begin() + in_offsets_[s];
    auto end = in_arcs_.begin() + in_offsets_[s + 1];
    std::sort(begin, end, [this](int32 x, int32 y) {
      if (arcs_[x].src != arcs_[y].src) return arcs_[x].src < arcs_[y].src;
      return x < y;
    });
  }

  const int32 t_max = std::max(num_frames_, 0);
  frame_offsets_.assign(t_max + 2, 0);
  for (StateId s = 0; s < n; ++s) {
    int32 f = state_frames_[s];
    if (f >= 0 && f <= t_max) ++frame_offsets_[f + 1];
  }
  std::partial_sum(frame_offsets_.begin(), frame_offsets_.end(),
                   frame_offsets_.begin());
  frame_states_.assign(frame_offsets_.back(), 0);
  std::vector<int32> frame_fill(frame_offsets_.begin(),
                                frame_offsets_.end() - 1);
  for (StateId s = 0; s < n; ++s) {
    int32 f = state_frames_[s];
    if (f >= 0 && f <= t_max) frame_states_[frame_fill[f]++] = s;
  }
}

void Lattice::Validate() {
  violations_.clear();
  auto add = [this](Violation::Kind kind, int32 id, std::string msg) {
    violations_.push_back({kind, id, std::move(msg)});
  };
  const int32 n = NumStates();
  auto in_range = [n](StateId s) { return s >= 0 && s < n; };

  if (num_frames_ < 1)
    add(Violation::Kind::kFrameRange, -1,
        "number of frames must be >= 1, got " + std::to_string(num_frames_));
  for (StateId s = 0; s < n; ++s) {
    if (state_frames_[s] < 0 || state_frames_[s] > num_frames_)
      add(Violation::Kind::kFrameRange, s,
          "state " + std::to_string(s) + " has frame " +
              std::to_string(state_frames_[s]) + " outside [0, " +
              std::to_string(num_frames_) + "]");
  }
  if (!in_range(start_)) {
    add(Violation::Kind::kStart, start_,
        "start state " + std::to_string(start_) + " does not exist");
  } else if (state_frames_[start_] != 0) {
    add(Violation::Kind::kStart, start_,
        "start state " + std::to_string(start_) + " is not at frame 0");
  }
  if (finals_.empty()) add(Violation::Kind::kFinal, -1, "no final state");
  {
    std::vector<char> seen(n, 0);
    for (StateId f : finals_) {
      if (!in_range(f)) {
        add(Violation::Kind::kFinal, f,
            "final state " + std::to_string(f) + " does not exist");
        continue;
      }
      if (seen[f])
        add(Violation::Kind::kFinal, f,
            "final state " + std::to_string(f) + " listed twice");
      seen[f] = 1;
      if (state_frames_[f] != num_frames_)
        add(Violation::Kind::kFinal, f,
            "final state " + std::to_string(f) + " is at frame " +
                std::to_string(state_frames_[f]) + ", not " +
                std::to_string(num_frames_));
    }
  }
  for (int32 a = 0; a < NumArcs(); ++a) {
    const Arc &arc = arcs_[a];
    if (!in_range(arc.src) || !in_range(arc.dst)) {
      add(Violation::Kind::kBadStateRef, a,
          "arc " + std::to_string(a) + " references a missing state");
      continue;
    }
    if (state_frames_[arc.dst] != state_frames_[arc.src] + 1)
      add(Violation::Kind::kFrameStep, a,
          "arc " + std::to_string(a) + " goes from frame " +
              std::to_string(state_frames_[arc.src]) + " to frame " +
              std::to_string(state_frames_[arc.dst]));
    if (arc.pdf < 1)
      add(Violation::Kind::kLabel, a,
          "arc " + std::to_string(a) + " has non-positive pdf id");
    if (arc.word < 0)
      add(Violation::Kind::kLabel, a,
          "arc " + std::to_string(a) + " has negative word id");
    if (!std::isfinite(arc.graph_weight))
      add(Violation::Kind::kWeight, a,
          "arc " + std::to_string(a) + " has non-finite weight");
  }

  // Reachability from start and co-reachability to a final.
  std::vector<char> fwd(n, 0), bwd(n, 0);
  std::vector<StateId> stack;
  if (in_range(start_)) {
    fwd[start_] = 1;
    stack.push_back(start_);
  }
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (int32 a : OutArcs(s)) {
      StateId d = arcs_[a].dst;
      if (!fwd[d]) {
        fwd[d] = 1;
        stack.push_back(d);
      }
    }
  }
  for (StateId f : finals_) {
    if (in_range(f) && !bwd[f]) {
      bwd[f] = 1;
      stack.push_back(f);
    }
  }
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (int32 a : InArcs(s)) {
      StateId p = arcs_[a].src;
      if (!bwd[p]) {
        bwd[p] = 1;
        stack.push_back(p);
      }
    }
  }
  for (StateId s = 0; s < n; ++s) {
    if (!fwd[s])
      add(Violation::Kind::kConnectivity, s,
          "state " + std::to_string(s) + " is unreachable from the start");
    else if (!bwd[s])
      add(Violation::Kind::kConnectivity, s,
          "state " + std::to_string(s) + " cannot reach a final state");
  }
}

std::span<const int32> Lattice::OutArcs(StateId s) const {
  return {out_arcs_.data() + out_offsets_[s],
          static_cast<size_t>(out_offsets_[s + 1] - out_offsets_[s])};
}

std::span<const int32> Lattice::InArcs(StateId s) const {
  return {in_arcs_.data() + in_offsets_[s],
          static_cast<size_t>(in_offsets_[s + 1] - in_offsets_[s])};
}

std::span<const StateId> Lattice::StatesAtFrame(int32 t) const {
  return {frame_states_.data() + frame_offsets_[t],
          static_cast<size_t>(frame_offsets_[t + 1] - frame_offsets_[t])};
}

PdfId Lattice::MaxPdf() const {
  PdfId m = 0;
  for (const Arc &arc : arcs_) m = std::max(m, arc.pdf);
  return m;
}

void Lattice::RequireValid(const char *context) const {
  if (IsValid()) return;
  const Violation &v = violations_.front();
  throw std::invalid_argument(std::string(context) + ": invalid lattice (" +
                              ViolationKindName(v.kind) + "): " + v.message);
}

bool Lattice::operator==(const Lattice &other) const {
  return num_frames_ == other.num_frames_ &&
         state_frames_ == other.state_frames_ && start_ == other.start_ &&
         finals_ == other.finals_ && arcs_ == other.arcs_;
}

std::vector<Violation> Validate(const Lattice &lattice) {
  return lattice.Violations();
}

Path MakePath(const Lattice &lattice, std::vector<int32> arc_ids) {
  Path path;
  StateId cur = lattice.Start();
  for (int32 a : arc_ids) {
    if (a < 0 || a >= lattice.NumArcs())
      throw std::invalid_argument("MakePath: arc id out of range");
    const Arc &arc = lattice.GetArc(a);
    if (arc.src != cur)
      throw std::invalid_argument("MakePath: arcs are not contiguous at arc " +
                                  std::to_string(a));
    path.arcs.push_back(arc);
    path.pdfs.push_back(arc.pdf);
    if (arc.word != kEpsilon) path.words.push_back(arc.word);
    path.graph_weight += arc.graph_weight;
    cur = arc.dst;
  }
  if (cur < 0 || cur >= lattice.NumStates() || !lattice.IsFinal(cur))
    throw std::invalid_argument("MakePath: path does not end in a final state");
  path.arc_ids = std::move(arc_ids);
  return path;
}

double PathScoreRange(const Path &path, const ScoreTable &scores, int32 begin,
                      int32 end) {
  if (begin < 0 || end > path.NumFrames() || begin > end)
    throw std::invalid_argument("PathScoreRange: bad frame range");
  if (path.NumFrames() != scores.NumFrames())
    throw std::invalid_argument(
        "PathScore: path has " + std::to_string(path.NumFrames()) +
        " frames but the score table has " +
        std::to_string(scores.NumFrames()));
  double total = 0.0;
  for (int32 t = begin; t < end; ++t) {
    const Arc &arc = path.arcs[t];
    if (arc.pdf < 1 || arc.pdf > scores.NumPdfs())
      throw std::invalid_argument("PathScore: pdf " + std::to_string(arc.pdf) +
                                  " outside score table");
    total += scores(t, arc.pdf) + arc.graph_weight;
  }
  return total;
}

double PathScore(const Path &path, const ScoreTable &scores) {
  return PathScoreRange(path, scores, 0, path.NumFrames());
}

std::string WordSequenceToString(const WordSequence &words) {
  std::ostringstream os;
  for (size_t i = 0; i < words.size(); ++i) os << (i ? " " : "") << words[i];
  return os.str();
}

}  // namespace latmmi
