// src/io/pipeline.h
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

#ifndef LATMMI_IO_PIPELINE_H_
#define LATMMI_IO_PIPELINE_H_

#include <string>
#include <vector>

#include "io/config.h"
#include "toy/lattice-gen.h"
#include "toy/training.h"

namespace latmmi {

/// Distinct word sequences of a lattice, sorted.
std::vector<WordSequence> LatticeWordSequences(const Lattice &lattice);

struct LatticeSizeSummary {
  int32 utterances = 0;
  int64 raw_arcs = 0, det_arcs = 0;
  double raw_paths = 0.0, det_paths = 0.0;
  double ArcRatio() const { return det_arcs > 0 ? double(raw_arcs) / det_arcs : 0.0; }
  double PathRatio() const { return det_paths > 0 ? raw_paths / det_paths : 0.0; }
};

LatticeSizeSummary SummarizeLattices(const std::vector<UtteranceLattices> &lats);

/// Files of utterance `index` under `dir`: utt-NNNN.{raw,det,num}.lat and
/// utt-NNNN.num.ali.
std::string UtteranceStem(const std::string &dir, int32 index);
void WriteUtteranceLattices(const std::string &dir, int32 index,
                            const UtteranceLattices &lat);
UtteranceLattices ReadUtteranceLattices(const std::string &dir, int32 index);

/// The whole in-memory experiment for one config: task, data, CE model,
/// lattices.  Used by the CLI steps and by the acceptance runs.
struct PreparedExperiment {
  ExperimentConfig config;
  ToyTask task;
  ToyDatasets data;
  ScorerParams ce_params;
  std::vector<UtteranceLattices> lattices;
};

PreparedExperiment PrepareExperiment(const ExperimentConfig &config);

/// Trains the prepared experiment under `train` (its mode, numerator, ...)
/// and returns the result; the held-out set for model selection is dev.
TrainResult RunTraining(const PreparedExperiment &exp, const TrainConfig &train,
                        const MetricsCallback &on_record = nullptr);

}  // namespace latmmi

#endif  // LATMMI_IO_PIPELINE_H_
