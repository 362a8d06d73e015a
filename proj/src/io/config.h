// src/io/config.h
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

#ifndef LATMMI_IO_CONFIG_H_
#define LATMMI_IO_CONFIG_H_

#include <string>

#include "toy/synth-data.h"
#include "toy/training.h"

namespace latmmi {

/// Everything one experiment needs.  The config file is INI style:
///
///   [synth]  vocab_size num_phones max_phones_per_word max_sentence_len
///            frames feature_dim noise template_scale lm_spread num_train
///            num_dev num_test enumeration_cap seed
///   [ce]     learning_rate iterations init_scale seed
///   [train]  mode numerator K learning_rate iterations batch_size seed
///            check_theorem parallel
///
/// Every key is optional and defaults to the built-in value; unknown
/// sections and keys are errors.
struct ExperimentConfig {
  SynthConfig synth;
  CeConfig ce;
  TrainConfig train;

  void Check() const;
  /// Replaces every seed with a stream derived from `seed`.
  void OverrideSeed(uint64 seed);
};

ExperimentConfig ParseConfigString(const std::string &text);
ExperimentConfig ReadConfigFile(const std::string &path);
/// Canonical text form; ParseConfigString(ConfigToString(c)) reproduces c.
std::string ConfigToString(const ExperimentConfig &config);

}  // namespace latmmi

#endif  // LATMMI_IO_CONFIG_H_
