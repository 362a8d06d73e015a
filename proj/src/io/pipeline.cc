// src/io/pipeline.cc
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

#include "io/pipeline.h"

#include <algorithm>
#include <cstdio>
#include <set>

#include "io/data-io.h"
#include "lat/lattice-algorithms.h"
#include "lat/lattice-io.h"

namespace latmmi {

std::vector<WordSequence> LatticeWordSequences(const Lattice &lattice) {
  // Word sequences do not depend on the scores.
  const ScoreTable zero(lattice.NumFrames(), std::max<int32>(1, lattice.MaxPdf()), 0.0);
  std::vector<WordSequence> out;
  for (const WordSequenceBest &w : BestAlignmentPerWordSequence(lattice, zero))
    out.push_back(w.words);
  std::sort(out.begin(), out.end());
  return out;
}

LatticeSizeSummary SummarizeLattices(const std::vector<UtteranceLattices> &lats) {
  LatticeSizeSummary s;
  for (const UtteranceLattices &l : lats) {
    ++s.utterances;
    s.raw_arcs += l.raw.NumArcs();
    s.det_arcs += l.det.NumArcs();
    s.raw_paths += CountPaths(l.raw);
    s.det_paths += CountPaths(l.det);
  }
  return s;
}

std::string UtteranceStem(const std::string &dir, int32 index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "/utt-%04d", index);
  return dir + buf;
}

void WriteUtteranceLattices(const std::string &dir, int32 index,
                            const UtteranceLattices &lat) {
  const std::string stem = UtteranceStem(dir, index);
  WriteLatticeFile(lat.raw, stem + ".raw.lat");
  WriteLatticeFile(lat.det, stem + ".det.lat");
  WriteLatticeFile(*lat.num, stem + ".num.lat");
  WriteAlignmentFile(lat.fixed_path, stem + ".num.ali");
}

UtteranceLattices ReadUtteranceLattices(const std::string &dir, int32 index) {
  const std::string stem = UtteranceStem(dir, index);
  UtteranceLattices lat;
  lat.raw = ReadLatticeFile(stem + ".raw.lat");
  lat.det = ReadLatticeFile(stem + ".det.lat");
  auto num = std::make_shared<Lattice>(ReadLatticeFile(stem + ".num.lat"));
  lat.fixed_path = ReadAlignmentFile(stem + ".num.ali", *num);
  lat.num = std::move(num);
  lat.hypotheses = LatticeWordSequences(lat.raw);
  return lat;
}

PreparedExperiment PrepareExperiment(const ExperimentConfig &config) {
  config.Check();
  PreparedExperiment exp;
  exp.config = config;
  exp.task = MakeToyTask(config.synth);
  exp.data = SynthAll(exp.task);
  exp.ce_params = CePretrain(exp.data.train, exp.task.space.NumPdfs(), config.ce);
  exp.lattices = MakeLattices(exp.task.space, exp.data.train, exp.ce_params,
                              config.train.K);
  return exp;
}

TrainResult RunTraining(const PreparedExperiment &exp, const TrainConfig &train,
                        const MetricsCallback &on_record) {
  return Train(exp.task.space, exp.data.train, exp.lattices, exp.data.dev,
               exp.ce_params, train, on_record);
}

}  // namespace latmmi
