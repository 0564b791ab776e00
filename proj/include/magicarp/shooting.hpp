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

// MAGICARP: pulses are generated self-iteratively from a constant adjoint
// matrix g, and the d^2 - 1 coordinates of g are the only optimization
// variables.
//
// For step n the projected controls are
//
//   ut_k(n dt) = 1/2 ReTr(U(n dt) g U^dagger(n dt) H_k)
//
// and U((n+1) dt) = exp(-i dt sum_k u_k(n dt) H_k) U(n dt). In energy-optimal
// mode u = ut. In time-optimal mode the direction of ut is kept and its norm
// is pinned to the initial envelope ||ut(0)||, so the drive is constant over
// the nominal horizon and the gate time is ||ut(0)|| / omega_max.

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "magicarp/propagation.hpp"
#include "magicarp/qudit.hpp"
#include "magicarp/report.hpp"

namespace magicarp {

enum class PulseMode { energy_optimal, time_optimal_renormalized };

PulseMode parse_pulse_mode(std::string_view name);
std::string to_string(PulseMode mode);

/// ||ut|| below this at any step makes the time-optimal direction undefined.
inline constexpr double kDegenerateEnvelope = 1e-14;

struct RandomNormalInit {
  double sigma = 1.0;
};
struct ExplicitInit {
  RealVector coeffs;
};
using AdjointInit = std::variant<RandomNormalInit, ExplicitInit>;

struct MagicarpConfig {
  PulseMode mode = PulseMode::energy_optimal;
  int n_steps = 128;
  int max_iters = 500;
  double grad_step = 1e-6;
  double convergence_tol = 1e-7;
  double stall_tol = 1e-12;
  int stall_window = 25;
  AdjointInit init = RandomNormalInit{};
  std::uint64_t seed = 0;

  /// Throws ValidationError on N < 1, non-positive step or tolerances.
  void validate() const;
};

/// Everything the objective needs besides g.
struct ShootingContext {
  ControlSet controls;
  UnitaryMatrix target;
  GeneratorBasis basis;
  PulseMode mode = PulseMode::energy_optimal;
  int n_steps = 128;
  double grad_step = 1e-6;

  ShootingContext(ControlSet controls, UnitaryMatrix target, const MagicarpConfig& config);

  int dim() const { return controls.dim(); }
  int parameter_count() const { return basis.size(); }
};

struct ConstructedPulse {
  PulseSchedule schedule;
  PropagationResult propagation;
};

/// Builds the schedule from g by interleaving projection and propagation.
/// Throws DegenerateEnvelope in time-optimal mode when ||ut|| vanishes.
ConstructedPulse pulses_from_adjoint(const AdjointMatrix& g, const ControlSet& controls,
                                     int n_steps, PulseMode mode);

/// Normalized infidelity of the gate generated by the coefficients.
double objective(const RealVector& coeffs, const ShootingContext& context);

/// Central differences, 2 (d^2 - 1) objective calls. Throws GradientError
/// carrying the probe coefficients if any probe is non-finite.
RealVector gradient(const RealVector& coeffs, const ShootingContext& context);

/// Starting coefficients drawn from the config's init rule and seed.
RealVector initial_coefficients(const MagicarpConfig& config, int dim);

/// Quasi-Newton descent on the infidelity over the coordinates of g.
OptimizationReport optimize(const ShootingContext& context, const MagicarpConfig& config);

/// Which normalized field the certificate compares against
/// 1/2 ReTr(U g U^dagger H_k): u / c for the duration cost (the optimality
/// definition), u itself for the sum_k u_k^2 cost.
enum class CertificateCost { time_optimal, energy_optimal };

CertificateCost parse_certificate_cost(std::string_view name);
std::string to_string(CertificateCost cost);

struct Certificate {
  AdjointMatrix g_fit;
  /// Root-mean-square residual over all fitted (step, control) equations.
  double residual = 0.0;
  /// Steps skipped because their envelope vanished (time-optimal cost only).
  int excluded_steps = 0;
  int equations = 0;
};

/// Least-squares fit of a constant traceless Hermitian g to the schedule's
/// normalized field. A residual near zero certifies the PMP structure.
/// Throws DegenerateInput for an all-zero schedule.
Certificate optimality_certificate(const PulseSchedule& schedule, const ControlSet& controls,
                                   CertificateCost cost = CertificateCost::time_optimal);

}  // namespace magicarp
