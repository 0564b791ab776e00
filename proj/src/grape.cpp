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

#include "magicarp/grape.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "magicarp/bench.hpp"
#include "magicarp/errors.hpp"

namespace magicarp {

void GrapeConfig::validate() const {
  if (n_steps < 1) throw ValidationError("n_steps must be >= 1");
  if (max_iters < 0) throw ValidationError("max_iters must be >= 0");
  if (!(convergence_tol > 0.0)) throw ValidationError("convergence_tol must be positive");
  if (!std::isfinite(penalty_weight) || penalty_weight < 0.0)
    throw ValidationError("penalty_weight must be finite and >= 0");
  if (!(stall_tol > 0.0)) throw ValidationError("stall_tol must be positive");
  if (stall_window < 1) throw ValidationError("stall_window must be >= 1");
  if (const auto* r = std::get_if<GrapeRandomInit>(&init)) {
    if (!(r->sigma > 0.0) || !std::isfinite(r->sigma))
      throw ValidationError("init sigma must be positive");
  } else if (const auto* e = std::get_if<GrapeExplicitInit>(&init)) {
    if (e->schedule.n_steps() != n_steps)
      throw ValidationError("explicit init schedule has the wrong number of steps");
  }
}

double energy_penalty(const PulseSchedule& schedule, const ControlSet& controls) {
  return schedule.dt() * schedule.amplitudes().squaredNorm() /
         tau_qsl(controls.dim(), controls.omega_max());
}

double grape_objective(const PulseSchedule& schedule, const UnitaryMatrix& target,
                       const ControlSet& controls, double penalty_weight) {
  if (target.dim() != controls.dim()) throw DimensionMismatch("target / controls mismatch");
  double value = normalized_infidelity(target, propagate_final(controls, schedule));
  if (penalty_weight != 0.0) value += penalty_weight * energy_penalty(schedule, controls);
  return value;
}

AmplitudeArray grape_gradient(const PulseSchedule& schedule, const UnitaryMatrix& target,
                              const ControlSet& controls, double penalty_weight) {
  if (target.dim() != controls.dim()) throw DimensionMismatch("target / controls mismatch");
  if (schedule.n_controls() != controls.size())
    throw DimensionMismatch("schedule / control set mismatch");
  const int d = controls.dim();
  const int n_steps = schedule.n_steps();
  const int k_count = controls.size();
  const double dt = schedule.dt();

  std::vector<StepExponential> steps;
  std::vector<Matrix> forward;  // forward[n] = U(n dt)
  steps.reserve(n_steps);
  forward.reserve(n_steps + 1);
  forward.push_back(Matrix::Identity(d, d));
  for (int n = 0; n < n_steps; ++n) {
    steps.push_back(StepExponential::compute(controls.combine(schedule.step(n).data()), dt));
    forward.push_back(steps.back().unitary * forward.back());
  }
  const Matrix& target_m = target.matrix();
  const cplx overlap = (target_m.conjugate().cwiseProduct(forward.back())).sum();
  const double scale = -2.0 / (static_cast<double>(d) * d);

  // z = Tr(V^dagger B_n E_n A_n); dz/du_nk = Tr(A_n V^dagger B_n dE_n).
  AmplitudeArray grad(n_steps, k_count);
  Matrix back = target_m.adjoint();  // V^dagger B_n, B_{N-1} = 1
  for (int n = n_steps - 1; n >= 0; --n) {
    const StepExponential& s = steps[n];
    const Matrix& q = s.eigenvectors;
    const Matrix y = q.adjoint() * forward[n] * back * q;
    const Matrix weights = y.transpose().cwiseProduct(s.divided_differences(dt));
    for (int k = 0; k < k_count; ++k) {
      const Matrix x = q.adjoint() * controls[k].matrix() * q;
      const cplx dz = weights.cwiseProduct(x).sum();
      grad(n, k) = scale * (std::conj(overlap) * dz).real();
    }
    back = back * s.unitary;
  }
  if (penalty_weight != 0.0)
    grad += (2.0 * penalty_weight * dt / tau_qsl(d, controls.omega_max())) *
            schedule.amplitudes();
  return grad;
}

PulseSchedule grape_initial_schedule(const GrapeConfig& config, int n_controls) {
  if (const auto* e = std::get_if<GrapeExplicitInit>(&config.init)) {
    if (e->schedule.n_controls() != n_controls)
      throw ValidationError("explicit init schedule has the wrong number of controls");
    return e->schedule;
  }
  if (std::holds_alternative<GrapeZerosInit>(config.init))
    return PulseSchedule::zeros(config.n_steps, n_controls);
  const double sigma = std::get<GrapeRandomInit>(config.init).sigma;
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, sigma);
  AmplitudeArray amps(config.n_steps, n_controls);
  for (Eigen::Index i = 0; i < amps.size(); ++i) amps.data()[i] = normal(rng);
  return PulseSchedule(std::move(amps));
}

namespace {

PulseSchedule unflatten(const RealVector& x, int n_steps, int n_controls) {
  return PulseSchedule(Eigen::Map<const AmplitudeArray>(x.data(), n_steps, n_controls));
}

}  // namespace

OptimizationReport grape_optimize(const UnitaryMatrix& target, const ControlSet& controls,
                                  const GrapeConfig& config) {
  config.validate();
  if (target.dim() != controls.dim()) throw DimensionMismatch("target / controls mismatch");
  const auto start = std::chrono::steady_clock::now();
  const int n_steps = config.n_steps;
  const int k_count = controls.size();

  DescentProblem problem{
      [&](const RealVector& x) {
        return grape_objective(unflatten(x, n_steps, k_count), target, controls,
                               config.penalty_weight);
      },
      [&](const RealVector& x) {
        const AmplitudeArray g = grape_gradient(unflatten(x, n_steps, k_count), target,
                                                controls, config.penalty_weight);
        return RealVector(Eigen::Map<const RealVector>(g.data(), g.size()));
      },
  };
  DescentOptions options;
  options.max_iters = config.max_iters;
  options.stall_tol = config.stall_tol;
  options.stall_window = config.stall_window;
  if (config.penalty_weight == 0.0) options.target = config.convergence_tol;

  const PulseSchedule init = grape_initial_schedule(config, k_count);
  const RealVector x0 = Eigen::Map<const RealVector>(init.amplitudes().data(),
                                                     init.amplitudes().size());
  const DescentResult result = minimize_bfgs(problem, x0, options);

  OptimizationReport report;
  report.algorithm = "grape";
  report.dim = controls.dim();
  report.parameter_count = n_steps * k_count;
  report.final_schedule = unflatten(result.x, n_steps, k_count);
  report.infidelity =
      normalized_infidelity(target, propagate_final(controls, report.final_schedule));
  report.duration = schedule_duration(report.final_schedule, controls.omega_max());
  report.duration_qsl = report.duration / tau_qsl(controls.dim(), controls.omega_max());
  report.cost_trace = result.trace;
  report.iterations = result.iterations;
  report.converged = report.infidelity <= config.convergence_tol;
  report.stop_reason = report.converged && config.penalty_weight == 0.0
                           ? StopReason::converged
                           : result.reason;
  report.seed = config.seed;
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace magicarp
