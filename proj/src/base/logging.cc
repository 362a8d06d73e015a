// src/base/logging.cc
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

#include "base/logging.h"

#include <atomic>
#include <iostream>
#include <mutex>

namespace latmmi {

namespace {
std::atomic<bool> g_warnings_enabled{true};
std::mutex g_warn_mutex;
}  // namespace

void SetWarningsEnabled(bool enabled) { g_warnings_enabled = enabled; }

bool WarningsEnabled() { return g_warnings_enabled; }

void EmitWarning(const std::string &msg) {
  std::lock_guard<std::mutex> lock(g_warn_mutex);
  std::cerr << "WARNING: " << msg << '\n';
}

}  // namespace latmmi
