// src/verify/suites.h
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

#ifndef LATMMI_VERIFY_SUITES_H_
#define LATMMI_VERIFY_SUITES_H_

#include <string>
#include <utility>
#include <vector>

#include "io/config.h"

namespace latmmi {

struct CriterionResult {
  CriterionResult() = default;
  CriterionResult(int32 id_, std::string name_) : id(id_), name(std::move(name_)) {}

  int32 id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  std::vector<std::pair<std::string, double>> values;
  double seconds = 0.0;
};

struct SuiteOptions {
  uint64 seed = 20240611;
  /// Deliberately breaks one input of every check so the failure path and
  /// its diagnostics can be exercised.
  bool corrupt = false;
  ExperimentConfig config;     // toy task for the training-based checks
  int32 theorem_iterations = 500;
  int32 experiment_seeds = 10;
  /// Floor of the relative-error denominator in the gradient check.
  double gradient_floor = 1e-6;
};

// Randomized oracle checks: forward (1), Viterbi and determinization (2),
// ancestral sampling (3), otf/baseline identity (6).
std::vector<CriterionResult> RunOracleSuite(const SuiteOptions &opts);
// Finite differences for the three objectives (4).
std::vector<CriterionResult> RunGradientSuite(const SuiteOptions &opts);
// Measure identities along a training run (5).
std::vector<CriterionResult> RunTheoremSuite(const SuiteOptions &opts);
// Seeded training grid (7, 8) and lattice sizes (9).
std::vector<CriterionResult> RunExperimentSuite(const SuiteOptions &opts);

/// Suite name -> runner; names are oracle, gradient, theorem, experiments.
std::vector<CriterionResult> RunSuite(const std::string &name,
                                      const SuiteOptions &opts);

/// One JSON object with a "criteria" array and an "all_passed" flag.
std::string SuiteReportJson(const std::string &suite,
                            const std::vector<CriterionResult> &results);
/// `PASS [n] name: detail` / `FAIL ...`
std::string FormatCriterionLine(const CriterionResult &r);

}  // namespace latmmi

#endif  // LATMMI_VERIFY_SUITES_H_
