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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "magicarp/optimizer.hpp"
#include "magicarp/propagation.hpp"

namespace magicarp {

/// Outcome of a MAGICARP or GRAPE run.
struct OptimizationReport {
  std::string algorithm;  // "magicarp" or "grape"
  int dim = 0;
  int parameter_count = 0;
  /// Converged adjoint matrix; empty for GRAPE.
  std::optional<AdjointMatrix> final_g;
  PulseSchedule final_schedule;
  double infidelity = 1.0;
  /// Gate time in units of 1 / omega_max.
  double duration = 0.0;
  double duration_qsl = 0.0;
  /// Objective after each accepted step, starting at the initial point.
  std::vector<double> cost_trace;
  int iterations = 0;
  bool converged = false;
  StopReason stop_reason = StopReason::max_iters;
  std::uint64_t seed = 0;
  double wall_time = 0.0;
};

}  // namespace magicarp
