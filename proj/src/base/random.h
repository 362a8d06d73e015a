// src/base/random.h
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

#ifndef LATMMI_BASE_RANDOM_H_
#define LATMMI_BASE_RANDOM_H_

#include "base/log-math.h"

namespace latmmi {

/// splitmix64 finalizer.
inline uint64 MixSeed(uint64 x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent sub-stream seed for (base, a, b); every random draw in the
/// project is keyed this way, so nothing depends on wall-clock state.
inline uint64 DeriveSeed(uint64 base, uint64 a, uint64 b = 0) {
  return MixSeed(MixSeed(MixSeed(base) ^ a) ^ (b * 0x632be59bd9b4e019ULL));
}

}  // namespace latmmi

#endif  // LATMMI_BASE_RANDOM_H_
