// src/io/data-io.h
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

#ifndef LATMMI_IO_DATA_IO_H_
#define LATMMI_IO_DATA_IO_H_

#include <string>
#include <vector>

#include "lat/lattice.h"
#include "toy/hmm-topology.h"
#include "toy/scorer.h"
#include "toy/synth-data.h"

namespace latmmi {

// Dataset container, one utterance per block:
//
//   DATASET v1
//   frames <T>
//   dim <F>
//   count <N>
//   utt <id>
//   words <w_1> ... <w_n>
//   align <pdf_0> ... <pdf_{T-1}>
//   feat <x_1> ... <x_F>          (T lines)
//
// The true alignment is stored by its pdf sequence; reading locates the
// matching path in the reference sentence graph of `space`.
std::string DatasetToString(const std::vector<Utterance> &utts);
std::vector<Utterance> ParseDataset(const std::string &text,
                                    const HypothesisSpace &space);
void WriteDatasetFile(const std::vector<Utterance> &utts, const std::string &path);
std::vector<Utterance> ReadDatasetFile(const std::string &path,
                                       const HypothesisSpace &space);

// Scorer parameters:
//
//   SCORER v1
//   pdfs <P>
//   dim <F>
//   bias <b_1> ... <b_P>
//   weight <w_p1> ... <w_pF>      (P lines)
std::string ScorerToString(const ScorerParams &params);
ScorerParams ParseScorer(const std::string &text);
void WriteScorerFile(const ScorerParams &params, const std::string &path);
ScorerParams ReadScorerFile(const std::string &path);

// A path of a known lattice, stored as arc ids:
//
//   ALIGNMENT v1
//   arcs <id_0> ... <id_{T-1}>
std::string AlignmentToString(const Path &path);
Path ParseAlignment(const std::string &text, const Lattice &lattice);
void WriteAlignmentFile(const Path &path, const std::string &file);
Path ReadAlignmentFile(const std::string &file, const Lattice &lattice);

// A score table (T lines of P values), used by the lattice tools:
//
//   SCORES v1
//   dims <T> <P>
//   row <a(t,1)> ... <a(t,P)>     (T lines)
std::string ScoreTableToString(const ScoreTable &scores);
ScoreTable ParseScoreTable(const std::string &text);
ScoreTable ReadScoreTableFile(const std::string &path);

}  // namespace latmmi

#endif  // LATMMI_IO_DATA_IO_H_
