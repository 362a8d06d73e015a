// src/lat/lattice-io.h
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

#ifndef LATMMI_LAT_LATTICE_IO_H_
#define LATMMI_LAT_LATTICE_IO_H_

#include <istream>
#include <ostream>
#include <string>

#include "lat/lattice.h"

namespace latmmi {

// Text lattice format, one record per line, '#' starts a comment:
//
//   LATTICE v1
//   frames <T>
//   state <id> <frame>        (ids dense 0..N-1, any order)
//   start <id>
//   final <id>                (one line per final state)
//   arc <src> <dst> <pdf> <word> <graph_logweight>
//
// Writing emits states by id, then start, finals and arcs in stored order, so
// ReadLattice(WriteLattice(L)) == L.

/// Throws ParseError with a line number on malformed input or on any
/// violated lattice invariant.
Lattice ReadLattice(std::istream &is);
Lattice ReadLatticeFromString(const std::string &text);
Lattice ReadLatticeFile(const std::string &path);

void WriteLattice(const Lattice &lattice, std::ostream &os);
std::string LatticeToString(const Lattice &lattice);
void WriteLatticeFile(const Lattice &lattice, const std::string &path);

}  // namespace latmmi

#endif  // LATMMI_LAT_LATTICE_IO_H_
