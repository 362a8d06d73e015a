// src/io/data-io.cc
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

#include "io/data-io.h"

#include <cmath>
#include <sstream>

#include "base/text-utils.h"
#include "lat/lattice-algorithms.h"

namespace latmmi {

namespace {

// Yields the non-empty records of a text, with 1-based line numbers.
class RecordReader {
 public:
  explicit RecordReader(const std::string &text) : is_(text) {}

  bool Next() {
    while (std::getline(is_, line_)) {
      ++line_no_;
      fields_ = SplitFields(line_);
      if (!fields_.empty()) return true;
    }
    fields_.clear();
    return false;
  }

  /// Reads the next record and checks its tag and field count (-1: any).
  const std::vector<std::string_view> &Expect(std::string_view tag,
                                              int32 num_values) {
    if (!Next()) throw ParseError(line_no_ + 1, "expected '" + std::string(tag) + "', got end of file");
    if (fields_[0] != tag)
      throw ParseError(line_no_, "expected '" + std::string(tag) + "', got '" +
                                     std::string(fields_[0]) + "'");
    if (num_values >= 0 && static_cast<int32>(fields_.size()) != num_values + 1)
      throw ParseError(line_no_, "'" + std::string(tag) + "' needs " +
                                     std::to_string(num_values) + " values, got " +
                                     std::to_string(fields_.size() - 1));
    return fields_;
  }

  int32 Int(size_t i) const {
    int32 v;
    if (!ParseInt(fields_.at(i), &v))
      throw ParseError(line_no_, "bad integer '" + std::string(fields_.at(i)) + "'");
    return v;
  }

  double Double(size_t i) const {
    double v;
    if (!ParseDouble(fields_.at(i), &v) || !std::isfinite(v))
      throw ParseError(line_no_, "bad number '" + std::string(fields_.at(i)) + "'");
    return v;
  }

  void Header(std::string_view magic) {
    if (!Next() || fields_.size() != 2 || fields_[0] != magic || fields_[1] != "v1")
      throw ParseError(line_no_, "expected header '" + std::string(magic) + " v1'");
  }

  void ExpectEnd() {
    if (Next()) throw ParseError(line_no_, "trailing content '" + std::string(fields_[0]) + "'");
  }

  int32 line() const { return line_no_; }
  size_t size() const { return fields_.size(); }

 private:
  std::istringstream is_;
  std::string line_;
  int32 line_no_ = 0;
  std::vector<std::string_view> fields_;
};

int32 PositiveInt(RecordReader &r, std::string_view tag) {
  r.Expect(tag, 1);
  const int32 v = r.Int(1);
  if (v < 1) throw ParseError(r.line(), std::string(tag) + " must be positive");
  return v;
}

}  // namespace

std::string DatasetToString(const std::vector<Utterance> &utts) {
  std::ostringstream os;
  const int32 T = utts.empty() ? 0 : static_cast<int32>(utts[0].features.rows());
  const int32 F = utts.empty() ? 0 : static_cast<int32>(utts[0].features.cols());
  os << "DATASET v1\nframes " << T << "\ndim " << F << "\ncount " << utts.size() << '\n';
  for (const Utterance &u : utts) {
    os << "utt " << u.id << "\nwords";
    for (WordId w : u.ref_words) os << ' ' << w;
    os << "\nalign";
    for (PdfId p : u.true_alignment.pdfs) os << ' ' << p;
    os << '\n';
    for (int32 t = 0; t < u.features.rows(); ++t) {
      os << "feat";
      for (int32 f = 0; f < u.features.cols(); ++f) os << ' ' << FormatDouble(u.features(t, f));
      os << '\n';
    }
  }
  return os.str();
}

std::vector<Utterance> ParseDataset(const std::string &text,
                                    const HypothesisSpace &space) {
  RecordReader r(text);
  r.Header("DATASET");
  const int32 T = PositiveInt(r, "frames");
  const int32 F = PositiveInt(r, "dim");
  r.Expect("count", 1);
  const int32 count = r.Int(1);
  if (count < 0) throw ParseError(r.line(), "negative count");
  if (T != space.NumFrames())
    throw ParseError(r.line(), "dataset has " + std::to_string(T) +
                                   " frames but the task has " +
                                   std::to_string(space.NumFrames()));
  std::vector<Utterance> utts;
  utts.reserve(count);
  for (int32 n = 0; n < count; ++n) {
    Utterance u;
    r.Expect("utt", 1);
    u.id = r.Int(1);
    r.Expect("words", -1);
    for (size_t i = 1; i < r.size(); ++i) u.ref_words.push_back(r.Int(i));
    u.ref_sentence = space.IndexOf(u.ref_words);
    if (u.ref_sentence < 0)
      throw ParseError(r.line(), "word sequence '" + WordSequenceToString(u.ref_words) +
                                     "' is not a sentence of the task");
    r.Expect("align", T);
    std::vector<PdfId> pdfs(T);
    for (int32 t = 0; t < T; ++t) pdfs[t] = r.Int(t + 1);
    if (!FindMatchingPath(space.SentenceGraph(u.ref_sentence), pdfs, u.ref_words,
                          &u.true_alignment))
      throw ParseError(r.line(), "alignment is not a path of the reference sentence");
    u.features.resize(T, F);
    for (int32 t = 0; t < T; ++t) {
      r.Expect("feat", F);
      for (int32 f = 0; f < F; ++f) u.features(t, f) = r.Double(f + 1);
    }
    utts.push_back(std::move(u));
  }
  r.ExpectEnd();
  return utts;
}

void WriteDatasetFile(const std::vector<Utterance> &utts, const std::string &path) {
  WriteFileAtomically(path, DatasetToString(utts));
}

std::vector<Utterance> ReadDatasetFile(const std::string &path,
                                       const HypothesisSpace &space) {
  try {
    return ParseDataset(ReadFileToString(path), space);
  } catch (const ParseError &e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

std::string ScorerToString(const ScorerParams &params) {
  std::ostringstream os;
  os << "SCORER v1\npdfs " << params.NumPdfs() << "\ndim " << params.FeatureDim()
     << "\nbias";
  for (int32 p = 0; p < params.NumPdfs(); ++p) os << ' ' << FormatDouble(params.bias(p));
  os << '\n';
  for (int32 p = 0; p < params.NumPdfs(); ++p) {
    os << "weight";
    for (int32 f = 0; f < params.FeatureDim(); ++f)
      os << ' ' << FormatDouble(params.weight(p, f));
    os << '\n';
  }
  return os.str();
}

ScorerParams ParseScorer(const std::string &text) {
  RecordReader r(text);
  r.Header("SCORER");
  const int32 P = PositiveInt(r, "pdfs");
  const int32 F = PositiveInt(r, "dim");
  ScorerParams params = ScorerParams::Zero(P, F);
  r.Expect("bias", P);
  for (int32 p = 0; p < P; ++p) params.bias(p) = r.Double(p + 1);
  for (int32 p = 0; p < P; ++p) {
    r.Expect("weight", F);
    for (int32 f = 0; f < F; ++f) params.weight(p, f) = r.Double(f + 1);
  }
  r.ExpectEnd();
  return params;
}

void WriteScorerFile(const ScorerParams &params, const std::string &path) {
  WriteFileAtomically(path, ScorerToString(params));
}

ScorerParams ReadScorerFile(const std::string &path) {
  try {
    return ParseScorer(ReadFileToString(path));
  } catch (const ParseError &e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

std::string AlignmentToString(const Path &path) {
  std::ostringstream os;
  os << "ALIGNMENT v1\narcs";
  for (int32 id : path.arc_ids) os << ' ' << id;
  os << '\n';
  return os.str();
}

Path ParseAlignment(const std::string &text, const Lattice &lattice) {
  RecordReader r(text);
  r.Header("ALIGNMENT");
  r.Expect("arcs", lattice.NumFrames());
  std::vector<int32> ids(lattice.NumFrames());
  for (int32 t = 0; t < lattice.NumFrames(); ++t) ids[t] = r.Int(t + 1);
  const int32 line = r.line();
  r.ExpectEnd();
  try {
    return MakePath(lattice, std::move(ids));
  } catch (const std::exception &e) {
    throw ParseError(line, e.what());
  }
}

void WriteAlignmentFile(const Path &path, const std::string &file) {
  WriteFileAtomically(file, AlignmentToString(path));
}

Path ReadAlignmentFile(const std::string &file, const Lattice &lattice) {
  try {
    return ParseAlignment(ReadFileToString(file), lattice);
  } catch (const ParseError &e) {
    throw std::runtime_error(file + ": " + e.what());
  }
}

std::string ScoreTableToString(const ScoreTable &scores) {
  std::ostringstream os;
  os << "SCORES v1\ndims " << scores.NumFrames() << ' ' << scores.NumPdfs() << '\n';
  for (int32 t = 0; t < scores.NumFrames(); ++t) {
    os << "row";
    for (PdfId p = 1; p <= scores.NumPdfs(); ++p) os << ' ' << FormatDouble(scores(t, p));
    os << '\n';
  }
  return os.str();
}

ScoreTable ParseScoreTable(const std::string &text) {
  RecordReader r(text);
  r.Header("SCORES");
  r.Expect("dims", 2);
  const int32 T = r.Int(1), P = r.Int(2);
  if (T < 1 || P < 1) throw ParseError(r.line(), "dims must be positive");
  ScoreTable scores(T, P, 0.0);
  for (int32 t = 0; t < T; ++t) {
    r.Expect("row", P);
    for (PdfId p = 1; p <= P; ++p) scores(t, p) = r.Double(p);
  }
  r.ExpectEnd();
  return scores;
}

ScoreTable ReadScoreTableFile(const std::string &path) {
  try {
    return ParseScoreTable(ReadFileToString(path));
  } catch (const ParseError &e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

}  // namespace latmmi
