/* Copyright 2026 The MAGICARP Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace magicarp {

// Process exit codes. Stable contract for scripts.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,        // run did not converge or failed at runtime
  kExitInvalidInput = 2,   // bad flags, config, schedule file or dimension
  kExitNotOptimal = 3,     // certify: residual above threshold
};

/// Certificate residuals at or below this pass `certify`.
inline constexpr double kCertifyThreshold = 1e-4;

/// Entry point of the `magicarp` tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace magicarp
