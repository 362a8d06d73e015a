// src/base/logging.h
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

#ifndef LATMMI_BASE_LOGGING_H_
#define LATMMI_BASE_LOGGING_H_

#include <sstream>
#include <string>

namespace latmmi {

// Warnings go to stderr unless silenced; tests silence them.
void SetWarningsEnabled(bool enabled);
bool WarningsEnabled();
void EmitWarning(const std::string &msg);

}  // namespace latmmi

#define LATMMI_WARN(expr)                          \
  do {                                             \
    if (::latmmi::WarningsEnabled()) {             \
      std::ostringstream latmmi_warn_os_;          \
      latmmi_warn_os_ << expr;                     \
      ::latmmi::EmitWarning(latmmi_warn_os_.str()); \
    }                                              \
  } while (0)

#endif  // LATMMI_BASE_LOGGING_H_
