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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "magicarp/qudit.hpp"

namespace magicarp {

enum class StopReason {
  converged,           // objective reached the target value
  stalled,             // relative decrease over the stall window below tolerance
  stationary,          // gradient norm below tolerance
  max_iters,
  line_search_failed,  // no Armijo step found, even along steepest descent
  error,               // gradient evaluation threw
};

std::string to_string(StopReason reason);

struct DescentOptions {
  int max_iters = 500;
  /// Stop as soon as the objective is <= target. Disabled when empty.
  std::optional<double> target;
  double stall_tol = 1e-12;
  int stall_window = 25;
  double grad_tol = 1e-14;
  double armijo_c = 1e-4;
  double shrink = 0.5;
  int max_backtracks = 60;
};

struct DescentProblem {
  /// May throw DegenerateEnvelope or NonFiniteError; the probe is then
  /// treated as a failed line-search trial.
  std::function<double(const RealVector&)> value;
  std::function<RealVector(const RealVector&)> gradient;
};

struct DescentResult {
  RealVector x;
  double value = 0.0;
  /// Objective at the start point followed by every accepted iterate.
  std::vector<double> trace;
  int iterations = 0;
  StopReason reason = StopReason::max_iters;
  std::string message;
};

/// BFGS on the inverse Hessian with backtracking Armijo line search.
DescentResult minimize_bfgs(const DescentProblem& problem, RealVector x0,
                            const DescentOptions& options);

}  // namespace magicarp
