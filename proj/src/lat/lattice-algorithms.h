// src/lat/lattice-algorithms.h
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

#ifndef LATMMI_LAT_LATTICE_ALGORITHMS_H_
#define LATMMI_LAT_LATTICE_ALGORITHMS_H_

#include <random>
#include <string>
#include <vector>

#include "lat/lattice.h"

namespace latmmi {

// Semiring shortest-distance algorithms over frame-synchronous lattices.
//
// The combined weight of an arc consuming frame t is a(t, pdf) + graph_weight.
// All dynamic programs visit frames in order, states of a frame by ascending
// id, and the incoming arcs of a state by (source state, arc id).  That fixes
// the floating-point summation order, so results are bit-reproducible.
//
// Argmax ties are broken towards the smallest (source state, arc id)
// backpointer, and among final states towards the smallest id.  On complete
// paths that is the ordering implemented by ViterbiTieLess().

/// Throws std::invalid_argument unless the lattice is valid and `scores`
/// has exactly lattice.NumFrames() rows and a column for every pdf used.
void CheckCompatible(const Lattice &lattice, const ScoreTable &scores,
                     const char *context);

/// alpha(s): log-sum over all start->s prefixes.
std::vector<double> ForwardScores(const Lattice &lattice,
                                  const ScoreTable &scores);

/// Log-sum over every start->final path of its score.
double ForwardLogSum(const Lattice &lattice, const ScoreTable &scores);

struct BackwardTable {
  std::vector<double> beta;  // beta(s): log-sum over s->final suffixes
  double Total(const Lattice &lattice) const { return beta[lattice.Start()]; }
};

BackwardTable BackwardFill(const Lattice &lattice, const ScoreTable &scores);

struct ScoredPath {
  Path path;
  double score = 0.0;
};

ScoredPath ViterbiBestPath(const Lattice &lattice, const ScoreTable &scores);

/// True if `a` wins a score tie against `b` under the backpointer rule.
/// Both paths must come from the same lattice.
bool ViterbiTieLess(const Path &a, const Path &b);

struct WordSequenceBest {
  WordSequence words;
  ScoredPath best;
};

/// For every distinct word sequence of the lattice, its highest-scoring
/// alignment.  Sorted by word sequence.
std::vector<WordSequenceBest> BestAlignmentPerWordSequence(
    const Lattice &lattice, const ScoreTable &scores);

/// Builds a tree-shaped lattice whose path set is exactly `paths`; paths
/// sharing a prefix of source arc ids share states.  All paths must come from
/// the same source lattice and have `num_frames` arcs.
Lattice PathsToLattice(int32 num_frames, const std::vector<Path> &paths);

/// Keeps exactly one alignment, the best under `scores`, per word sequence.
Lattice DeterminizeBestAlignment(const Lattice &lattice,
                                 const ScoreTable &scores);

/// Draws paths with probability exp(score - total) by walking forward from
/// the start and picking each arc with its backward-normalized probability
/// exp(w + beta(dst) - beta(src)).  Holds references: the lattice, scores and
/// backward table must outlive the sampler.
class AncestralSampler {
 public:
  /// Throws std::invalid_argument if `beta` was not computed from this
  /// (lattice, scores) pair.
  AncestralSampler(const Lattice &lattice, const ScoreTable &scores,
                   const BackwardTable &beta);

  Path Sample(std::mt19937_64 &rng) const;

  /// Largest |sum of local arc probabilities - 1| seen so far.
  double MaxLocalNormError() const { return max_local_error_; }

 private:
  const Lattice &lattice_;
  const ScoreTable &scores_;
  const BackwardTable &beta_;
  mutable double max_local_error_ = 0.0;
};

Path AncestralSample(const Lattice &lattice, const ScoreTable &scores,
                     const BackwardTable &beta, uint64 seed);

/// Number of start->final paths (exact up to 2^53).
double CountPaths(const Lattice &lattice);

/// All start->final paths with their scores, in depth-first order over
/// ascending arc ids.  Refuses (std::length_error carrying the count) if the
/// lattice has more than `max_paths` paths.
std::vector<ScoredPath> EnumeratePaths(const Lattice &lattice,
                                       const ScoreTable &scores,
                                       double max_paths);

/// gamma(t, p): posterior probability that the frame-t arc carries pdf p.
OccupancyTable Occupancies(const Lattice &lattice, const ScoreTable &scores);

/// Same as Occupancies() when alpha/beta are already available.
OccupancyTable OccupanciesFromTables(const Lattice &lattice,
                                     const ScoreTable &scores,
                                     const std::vector<double> &alpha,
                                     const std::vector<double> &beta,
                                     double total);

/// Finds the path of `lattice` with the given pdf and word sequences.
/// Returns false if there is none.
bool FindMatchingPath(const Lattice &lattice, const std::vector<PdfId> &pdfs,
                      const WordSequence &words, Path *out);

/// Debug line: `path <score> <pdf_0> ... <pdf_{T-1}> | <word ids>`.
std::string FormatPathLine(const Path &path, double score);

}  // namespace latmmi

#endif  // LATMMI_LAT_LATTICE_ALGORITHMS_H_
