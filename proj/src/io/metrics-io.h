// src/io/metrics-io.h
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

#ifndef LATMMI_IO_METRICS_IO_H_
#define LATMMI_IO_METRICS_IO_H_

#include <ostream>
#include <string>
#include <vector>

#include "toy/training.h"

namespace latmmi {

/// One JSON object on a single line (no trailing newline).  The key set is
/// the same for every mode.
std::string MetricsToJsonLine(const MetricsRecord &record);
/// Throws std::invalid_argument on malformed JSON or missing keys.
MetricsRecord ParseMetricsJsonLine(const std::string &line);
std::vector<MetricsRecord> ReadMetricsFile(const std::string &path);

/// Appends records to a JSON-lines file as they arrive, flushing each line so
/// a run that aborts keeps everything written so far.
class MetricsWriter {
 public:
  explicit MetricsWriter(const std::string &path);
  void Write(const MetricsRecord &record);

 private:
  std::string path_;
};

}  // namespace latmmi

#endif  // LATMMI_IO_METRICS_IO_H_
