// src/base/log-math.h
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

#ifndef LATMMI_BASE_LOG_MATH_H_
#define LATMMI_BASE_LOG_MATH_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>

namespace latmmi {

using int32 = std::int32_t;
using int64 = std::int64_t;
using uint64 = std::uint64_t;

/// Additive identity of the log semiring.  Only ever lives in scratch
/// buffers of the dynamic programs; lattices and score tables never hold it.
inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

/// log(exp(a) + exp(b)), shifted by the max so neither term overflows.
inline double LogAdd(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == kLogZero) return a;
  return a + std::log1p(std::exp(b - a));
}

/// Max-shifted log-sum-exp; summation runs in element order.
inline double LogSumExp(std::span<const double> values) {
  double max = kLogZero;
  for (double v : values) max = std::max(max, v);
  if (max == kLogZero) return kLogZero;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - max);
  return max + std::log(sum);
}

}  // namespace latmmi

#endif  // LATMMI_BASE_LOG_MATH_H_
