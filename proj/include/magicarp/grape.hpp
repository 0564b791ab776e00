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
#include <variant>

#include "magicarp/propagation.hpp"
#include "magicarp/report.hpp"

namespace magicarp {

struct GrapeZerosInit {};
struct GrapeRandomInit {
  double sigma = 1.0;
};
struct GrapeExplicitInit {
  PulseSchedule schedule;
};
using GrapeInit = std::variant<GrapeZerosInit, GrapeRandomInit, GrapeExplicitInit>;

struct GrapeConfig {
  int n_steps = 64;
  int max_iters = 1000;
  double convergence_tol = 1e-7;
  /// Weight of the energy term dt sum u^2 / tau_QSL. With a positive weight
  /// the run continues past convergence_tol until the penalized objective
  /// is stationary.
  double penalty_weight = 0.0;
  double stall_tol = 1e-12;
  int stall_window = 25;
  GrapeInit init = GrapeRandomInit{};
  std::uint64_t seed = 0;

  void validate() const;
};

/// dt * sum_{n,k} u_k(n dt)^2 / tau_QSL(d, omega_max)
double energy_penalty(const PulseSchedule& schedule, const ControlSet& controls);

/// normalized infidelity + penalty_weight * energy_penalty
double grape_objective(const PulseSchedule& schedule, const UnitaryMatrix& target,
                       const ControlSet& controls, double penalty_weight);

/// Exact gradient of grape_objective with respect to every u_k(n dt). Step
/// exponential derivatives use the eigenbasis divided differences.
AmplitudeArray grape_gradient(const PulseSchedule& schedule, const UnitaryMatrix& target,
                              const ControlSet& controls, double penalty_weight);

PulseSchedule grape_initial_schedule(const GrapeConfig& config, int n_controls);

OptimizationReport grape_optimize(const UnitaryMatrix& target, const ControlSet& controls,
                                  const GrapeConfig& config);

}  // namespace magicarp
