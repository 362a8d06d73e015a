// src/lat/lattice.h
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

#ifndef LATMMI_LAT_LATTICE_H_
#define LATMMI_LAT_LATTICE_H_

#include <span>
#include <string>
#include <vector>

#include "base/log-math.h"

namespace latmmi {

using StateId = int32;
using PdfId = int32;   // 1-based acoustic unit index
using WordId = int32;  // 0 is epsilon
using WordSequence = std::vector<WordId>;

inline constexpr WordId kEpsilon = 0;

/// One frame-consuming transition.  graph_weight is a natural-log weight
/// (transition and language model contribution); acoustic scores are not
/// stored on the lattice and are supplied per evaluation by a ScoreTable.
struct Arc {
  StateId src = 0;
  StateId dst = 0;
  PdfId pdf = 1;
  WordId word = kEpsilon;
  double graph_weight = 0.0;

  bool operator==(const Arc &) const = default;
};

/// Dense T x P table indexed by (frame, pdf) with 1-based pdf columns.
/// Used for acoustic log-scores, occupancies and gradients.
class PdfMatrix {
 public:
  PdfMatrix() = default;
  PdfMatrix(int32 num_frames, int32 num_pdfs, double fill = 0.0);
  PdfMatrix(int32 num_frames, int32 num_pdfs, std::vector<double> row_major);

  int32 NumFrames() const { return num_frames_; }
  int32 NumPdfs() const { return num_pdfs_; }

  double operator()(int32 t, PdfId pdf) const {
    return data_[static_cast<size_t>(t) * num_pdfs_ + (pdf - 1)];
  }
  double &operator()(int32 t, PdfId pdf) {
    return data_[static_cast<size_t>(t) * num_pdfs_ + (pdf - 1)];
  }

  std::span<const double> Row(int32 t) const {
    return {data_.data() + static_cast<size_t>(t) * num_pdfs_,
            static_cast<size_t>(num_pdfs_)};
  }
  std::span<double> Row(int32 t) {
    return {data_.data() + static_cast<size_t>(t) * num_pdfs_,
            static_cast<size_t>(num_pdfs_)};
  }
  const std::vector<double> &Data() const { return data_; }

  bool AllFinite() const;
  bool operator==(const PdfMatrix &) const = default;

 private:
  int32 num_frames_ = 0;
  int32 num_pdfs_ = 0;
  std::vector<double> data_;
};

/// Acoustic log-scores a(t, p).  Entries must be finite.
using ScoreTable = PdfMatrix;
/// Posterior mass gamma(t, p); rows sum to one.
using OccupancyTable = PdfMatrix;

/// Throws std::invalid_argument if any entry is not finite.
void CheckScoreTable(const ScoreTable &scores);

struct Violation {
  enum class Kind {
    kFrameRange,
    kFrameStep,
    kBadStateRef,
    kStart,
    kFinal,
    kConnectivity,
    kLabel,
    kWeight,
    kDuplicateState,
  };
  Kind kind;
  int32 id;  // offending state or arc id (-1 when not applicable)
  std::string message;
};

const char *ViolationKindName(Violation::Kind kind);

/// Frame-synchronous acyclic lattice.  States are dense ids 0..N-1, each at a
/// frame in [0, T]; every arc advances exactly one frame.  The object is
/// immutable; structural validation runs once at construction and its result
/// is cached, so algorithms can cheaply refuse invalid input.
class Lattice {
 public:
  Lattice() = default;
  Lattice(int32 num_frames, std::vector<int32> state_frames, StateId start,
          std::vector<StateId> finals, std::vector<Arc> arcs);

  int32 NumFrames() const { return num_frames_; }
  int32 NumStates() const { return static_cast<int32>(state_frames_.size()); }
  int32 NumArcs() const { return static_cast<int32>(arcs_.size()); }
  StateId Start() const { return start_; }
  const std::vector<StateId> &Finals() const { return finals_; }
  bool IsFinal(StateId s) const { return is_final_[s]; }
  int32 Frame(StateId s) const { return state_frames_[s]; }
  const std::vector<int32> &StateFrames() const { return state_frames_; }
  const std::vector<Arc> &Arcs() const { return arcs_; }
  const Arc &GetArc(int32 arc_id) const { return arcs_[arc_id]; }

  /// Outgoing arc ids of s, ascending.
  std::span<const int32> OutArcs(StateId s) const;
  /// Incoming arc ids of s, ordered by (source state, arc id).
  std::span<const int32> InArcs(StateId s) const;
  /// States at frame t, ascending.
  std::span<const StateId> StatesAtFrame(int32 t) const;

  /// Largest pdf id on any arc (0 for an arcless lattice).
  PdfId MaxPdf() const;

  bool IsValid() const { return violations_.empty(); }
  const std::vector<Violation> &Violations() const { return violations_; }
  /// Throws std::invalid_argument naming the first violation.
  void RequireValid(const char *context) const;

  bool operator==(const Lattice &other) const;

 private:
  void BuildIndex();
  void Validate();

  int32 num_frames_ = 0;
  std::vector<int32> state_frames_;
  StateId start_ = 0;
  std::vector<StateId> finals_;
  std::vector<Arc> arcs_;

  std::vector<char> is_final_;
  std::vector<int32> out_offsets_, out_arcs_;
  std::vector<int32> in_offsets_, in_arcs_;
  std::vector<int32> frame_offsets_;
  std::vector<StateId> frame_states_;
  std::vector<Violation> violations_;
};

/// Every violated structural invariant with the offending state/arc id.
std::vector<Violation> Validate(const Lattice &lattice);

/// One alignment: a start-to-final arc sequence.  Arcs are copied so a path
/// remains meaningful independently of the lattice it was read from.
struct Path {
  std::vector<int32> arc_ids;  // indices into the originating lattice
  std::vector<Arc> arcs;
  WordSequence words;          // non-epsilon word labels in order
  std::vector<PdfId> pdfs;     // pdfs[t] = arcs[t].pdf
  double graph_weight = 0.0;

  int32 NumFrames() const { return static_cast<int32>(arcs.size()); }
  bool operator==(const Path &other) const {
    return arcs == other.arcs;
  }
};

/// Builds a path from arc ids.  Throws std::invalid_argument unless the arcs
/// are contiguous and run from the start state to a final state.
Path MakePath(const Lattice &lattice, std::vector<int32> arc_ids);

/// Sum over frames of a(t, pdf_t) + graph_weight_t, in frame order.
double PathScore(const Path &path, const ScoreTable &scores);

/// Score of frames [begin, end) of the path, same summation order.
double PathScoreRange(const Path &path, const ScoreTable &scores, int32 begin,
                      int32 end);

std::string WordSequenceToString(const WordSequence &words);

}  // namespace latmmi

#endif  // LATMMI_LAT_LATTICE_H_
