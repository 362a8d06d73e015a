// src/lat/lattice-io.cc
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

#include "lat/lattice-io.h"

#include <fstream>
#include <map>
#include <sstream>

#include "base/text-utils.h"

namespace latmmi {

namespace {

int32 ExpectInt(std::string_view field, int line, const char *what) {
  int32 v;
  if (!ParseInt(field, &v))
    throw ParseError(line, std::string("expected integer ") + what + ", got '" +
                               std::string(field) + "'");
  return v;
}

}  // namespace

Lattice ReadLattice(std::istream &is) {
  std::string line;
  int line_no = 0;
  int header_stage = 0;  // 0: want LATTICE, 1: want frames, 2: body
  int32 num_frames = 0;
  int frames_line = 0;
  std::map<StateId, std::pair<int32, int>> states;  // id -> (frame, line)
  StateId start = -1;
  int start_line = 0;
  std::vector<StateId> finals;
  std::vector<int> final_lines;
  std::vector<Arc> arcs;
  std::vector<int> arc_lines;

  while (std::getline(is, line)) {
    ++line_no;
    auto f = SplitFields(line);
    if (f.empty()) continue;
    if (header_stage == 0) {
      if (f.size() != 2 || f[0] != "LATTICE" || f[1] != "v1")
        throw ParseError(line_no, "expected header 'LATTICE v1'");
      header_stage = 1;
      continue;
    }
    if (header_stage == 1) {
      if (f.size() != 2 || f[0] != "frames")
        throw ParseError(line_no, "expected 'frames <T>'");
      num_frames = ExpectInt(f[1], line_no, "frame count");
      if (num_frames < 1)
        throw ParseError(line_no, "frame count must be >= 1");
      frames_line = line_no;
      header_stage = 2;
      continue;
    }
    const std::string_view kind = f[0];
    if (kind == "state") {
      if (f.size() != 3) throw ParseError(line_no, "expected 'state <id> <frame>'");
      StateId id = ExpectInt(f[1], line_no, "state id");
      int32 frame = ExpectInt(f[2], line_no, "frame");
      if (id < 0) throw ParseError(line_no, "negative state id");
      if (!states.emplace(id, std::make_pair(frame, line_no)).second)
        throw ParseError(line_no, "duplicate state " + std::to_string(id));
    } else if (kind == "start") {
      if (f.size() != 2) throw ParseError(line_no, "expected 'start <id>'");
      if (start_line != 0) throw ParseError(line_no, "second start state");
      start = ExpectInt(f[1], line_no, "start id");
      start_line = line_no;
    } else if (kind == "final") {
      if (f.size() != 2) throw ParseError(line_no, "expected 'final <id>'");
      finals.push_back(ExpectInt(f[1], line_no, "final id"));
      final_lines.push_back(line_no);
    } else if (kind == "arc") {
      if (f.size() != 6)
        throw ParseError(line_no,
                         "expected 'arc <src> <dst> <pdf> <word> <weight>'");
      Arc arc;
      arc.src = ExpectInt(f[1], line_no, "source state");
      arc.dst = ExpectInt(f[2], line_no, "destination state");
      arc.pdf = ExpectInt(f[3], line_no, "pdf id");
      arc.word = ExpectInt(f[4], line_no, "word id");
      if (!ParseDouble(f[5], &arc.graph_weight))
        throw ParseError(line_no, "expected real weight, got '" +
                                      std::string(f[5]) + "'");
      arcs.push_back(arc);
      arc_lines.push_back(line_no);
    } else {
      throw ParseError(line_no, "unknown record '" + std::string(kind) + "'");
    }
  }
  if (header_stage == 0) throw ParseError(line_no + 1, "missing 'LATTICE v1' header");
  if (header_stage == 1) throw ParseError(line_no + 1, "missing 'frames' line");
  if (start_line == 0) throw ParseError(line_no + 1, "missing start state");

  // Dense ids: the largest id must equal count - 1.
  std::vector<int32> state_frames(states.size());
  {
    StateId expect = 0;
    for (const auto &[id, fl] : states) {
      if (id != expect)
        throw ParseError(fl.second, "state ids must be dense from 0; missing " +
                                        std::to_string(expect));
      state_frames[id] = fl.first;
      ++expect;
    }
  }

  Lattice lat(num_frames, std::move(state_frames), start, finals, arcs);
  if (!lat.IsValid()) {
    const Violation &v = lat.Violations().front();
    int at = line_no;
    switch (v.kind) {
      case Violation::Kind::kFrameStep:
      case Violation::Kind::kBadStateRef:
      case Violation::Kind::kLabel:
      case Violation::Kind::kWeight:
        at = arc_lines[v.id];
        break;
      case Violation::Kind::kStart:
        at = start_line;
        break;
      case Violation::Kind::kFinal:
        at = frames_line;
        for (size_t i = 0; i < finals.size(); ++i)
          if (finals[i] == v.id) at = final_lines[i];
        break;
      case Violation::Kind::kFrameRange:
      case Violation::Kind::kConnectivity:
      case Violation::Kind::kDuplicateState:
        at = (v.id >= 0 && states.count(v.id)) ? states.at(v.id).second
                                               : frames_line;
        break;
    }
    throw ParseError(at, std::string("invalid lattice (") +
                             ViolationKindName(v.kind) + "): " + v.message);
  }
  return lat;
}

Lattice ReadLatticeFromString(const std::string &text) {
  std::istringstream is(text);
  return ReadLattice(is);
}

Lattice ReadLatticeFile(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open lattice file " + path);
  try {
    return ReadLattice(is);
  } catch (const ParseError &e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void WriteLattice(const Lattice &lattice, std::ostream &os) {
  os << "LATTICE v1\n";
  os << "frames " << lattice.NumFrames() << '\n';
  for (StateId s = 0; s < lattice.NumStates(); ++s)
    os << "state " << s << ' ' << lattice.Frame(s) << '\n';
  os << "start " << lattice.Start() << '\n';
  for (StateId f : lattice.Finals()) os << "final " << f << '\n';
  for (const Arc &arc : lattice.Arcs())
    os << "arc " << arc.src << ' ' << arc.dst << ' ' << arc.pdf << ' '
       << arc.word << ' ' << FormatDouble(arc.graph_weight) << '\n';
}

std::string LatticeToString(const Lattice &lattice) {
  std::ostringstream os;
  WriteLattice(lattice, os);
  return os.str();
}

void WriteLatticeFile(const Lattice &lattice, const std::string &path) {
  WriteFileAtomically(path, LatticeToString(lattice));
}

}  // namespace latmmi
