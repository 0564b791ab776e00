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

#include "magicarp/shooting.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "magicarp/bench.hpp"
#include "magicarp/errors.hpp"

namespace magicarp {

PulseMode parse_pulse_mode(std::string_view name) {
  if (name == "energy_optimal") return PulseMode::energy_optimal;
  if (name == "time_optimal_renormalized") return PulseMode::time_optimal_renormalized;
  throw ValidationError("unknown pulse mode '" + std::string(name) + "'");
}

std::string to_string(PulseMode mode) {
  return mode == PulseMode::energy_optimal ? "energy_optimal" : "time_optimal_renormalized";
}

CertificateCost parse_certificate_cost(std::string_view name) {
  if (name == "time" || name == "time_optimal") return CertificateCost::time_optimal;
  if (name == "energy" || name == "energy_optimal") return CertificateCost::energy_optimal;
  throw ValidationError("unknown certificate cost '" + std::string(name) + "'");
}

std::string to_string(CertificateCost cost) {
  return cost == CertificateCost::time_optimal ? "time_optimal" : "energy_optimal";
}

void MagicarpConfig::validate() const {
  if (n_steps < 1) throw ValidationError("n_steps must be >= 1");
  if (max_iters < 0) throw ValidationError("max_iters must be >= 0");
  if (!(grad_step > 0.0) || !std::isfinite(grad_step))
    throw ValidationError("grad_step must be positive");
  if (!(convergence_tol > 0.0)) throw ValidationError("convergence_tol must be positive");
  if (!(stall_tol > 0.0)) throw ValidationError("stall_tol must be positive");
  if (stall_window < 1) throw ValidationError("stall_window must be >= 1");
  if (const auto* r = std::get_if<RandomNormalInit>(&init)) {
    if (!(r->sigma > 0.0) || !std::isfinite(r->sigma))
      throw ValidationError("init sigma must be positive");
  } else if (!std::get<ExplicitInit>(init).coeffs.allFinite()) {
    throw ValidationError("explicit init coefficients must be finite");
  }
}

ShootingContext::ShootingContext(ControlSet controls_, UnitaryMatrix target_,
                                 const MagicarpConfig& config)
    : controls(std::move(controls_)),
      target(std::move(target_)),
      basis(GeneratorBasis::gell_mann(controls.dim())),
      mode(config.mode),
      n_steps(config.n_steps),
      grad_step(config.grad_step) {
  config.validate();
  if (target.dim() != controls.dim())
    throw DimensionMismatch("target and control set differ in dimension");
}

namespace {

// Self-iterative construction. Returns U(N dt); optionally records the
// amplitudes and the unitary trajectory.
Matrix construct(const Matrix& g, const ControlSet& controls, int n_steps, PulseMode mode,
                 AmplitudeArray* amps_out, std::vector<UnitaryMatrix>* trajectory) {
  const int d = controls.dim();
  const int k_count = controls.size();
  const double dt = 1.0 / n_steps;
  Matrix u = Matrix::Identity(d, d);
  Matrix rotated = g;
  RealVector amps(k_count);
  double envelope0 = 0.0;
  if (amps_out) amps_out->resize(n_steps, k_count);
  if (trajectory) {
    trajectory->clear();
    trajectory->reserve(n_steps + 1);
    trajectory->push_back(UnitaryMatrix::unchecked(u));
  }
  for (int n = 0; n < n_steps; ++n) {
    if (n > 0) rotated = u * g * u.adjoint();
    for (int k = 0; k < k_count; ++k)
      amps[k] = 0.5 * trace_inner(controls[k].matrix(), rotated);
    if (mode == PulseMode::time_optimal_renormalized) {
      const double norm = amps.norm();
      if (!(norm >= kDegenerateEnvelope))
        throw DegenerateEnvelope(
            "projected control vanishes at step " + std::to_string(n), n);
      if (n == 0) envelope0 = norm;
      amps *= envelope0 / norm;
    }
    if (!amps.allFinite()) throw NonFiniteError("non-finite amplitude at step " + std::to_string(n));
    if (amps_out) amps_out->row(n) = amps.transpose();
    u = StepExponential::compute(controls.combine(amps.data()), dt).unitary * u;
    if (trajectory) trajectory->push_back(UnitaryMatrix::unchecked(u));
  }
  return u;
}

}  // namespace

ConstructedPulse pulses_from_adjoint(const AdjointMatrix& g, const ControlSet& controls,
                                     int n_steps, PulseMode mode) {
  if (g.dim != controls.dim()) throw DimensionMismatch("adjoint matrix / controls dimension mismatch");
  if (n_steps < 1) throw ValidationError("n_steps must be >= 1");
  AmplitudeArray amps;
  ConstructedPulse out;
  construct(g.matrix(), controls, n_steps, mode, &amps, &out.propagation.unitaries);
  out.schedule = PulseSchedule(std::move(amps));
  out.propagation.envelope.reserve(n_steps);
  for (int n = 0; n < n_steps; ++n) out.propagation.envelope.push_back(out.schedule.envelope(n));
  out.propagation.duration = schedule_duration(out.schedule, controls.omega_max());
  return out;
}

double objective(const RealVector& coeffs, const ShootingContext& ctx) {
  if (coeffs.size() != ctx.parameter_count())
    throw DimensionMismatch("expected " + std::to_string(ctx.parameter_count()) + " coefficients");
  const Matrix g = ctx.basis.reconstruct(coeffs);
  const Matrix u = construct(g, ctx.controls, ctx.n_steps, ctx.mode, nullptr, nullptr);
  return normalized_infidelity(ctx.target, UnitaryMatrix::unchecked(u));
}

RealVector gradient(const RealVector& coeffs, const ShootingContext& ctx) {
  const double h = ctx.grad_step;
  RealVector grad(coeffs.size());
  RealVector probe = coeffs;
  auto eval = [&](const RealVector& c) {
    const double f = objective(c, ctx);
    if (!std::isfinite(f))
      throw GradientError("non-finite objective at finite-difference probe",
                          std::vector<double>(c.data(), c.data() + c.size()));
    return f;
  };
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    probe[i] = coeffs[i] + h;
    const double plus = eval(probe);
    probe[i] = coeffs[i] - h;
    const double minus = eval(probe);
    probe[i] = coeffs[i];
    grad[i] = (plus - minus) / (2.0 * h);
  }
  return grad;
}

RealVector initial_coefficients(const MagicarpConfig& config, int dim) {
  const int count = AdjointMatrix::parameter_count(dim);
  if (const auto* e = std::get_if<ExplicitInit>(&config.init)) {
    if (e->coeffs.size() != count)
      throw ValidationError("explicit init needs " + std::to_string(count) + " coefficients");
    return e->coeffs;
  }
  const double sigma = std::get<RandomNormalInit>(config.init).sigma;
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, sigma);
  RealVector c(count);
  for (int i = 0; i < count; ++i) c[i] = normal(rng);
  return c;
}

OptimizationReport optimize(const ShootingContext& ctx, const MagicarpConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  DescentProblem problem{
      [&](const RealVector& c) { return objective(c, ctx); },
      [&](const RealVector& c) { return gradient(c, ctx); },
  };
  DescentOptions options;
  options.max_iters = config.max_iters;
  options.target = config.convergence_tol;
  options.stall_tol = config.stall_tol;
  options.stall_window = config.stall_window;

  const DescentResult result =
      minimize_bfgs(problem, initial_coefficients(config, ctx.dim()), options);

  OptimizationReport report;
  report.algorithm = "magicarp";
  report.dim = ctx.dim();
  report.parameter_count = ctx.parameter_count();
  report.final_g = AdjointMatrix{ctx.dim(), result.x};
  const ConstructedPulse pulse =
      pulses_from_adjoint(*report.final_g, ctx.controls, ctx.n_steps, ctx.mode);
  report.final_schedule = pulse.schedule;
  report.infidelity = result.value;
  report.duration = pulse.propagation.duration;
  report.duration_qsl = report.duration / tau_qsl(ctx.dim(), ctx.controls.omega_max());
  report.cost_trace = result.trace;
  report.iterations = result.iterations;
  report.converged = result.value <= config.convergence_tol;
  report.stop_reason = result.reason;
  report.seed = config.seed;
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

Certificate optimality_certificate(const PulseSchedule& schedule, const ControlSet& controls,
                                   CertificateCost cost) {
  if (schedule.n_controls() != controls.size())
    throw DimensionMismatch("schedule / control set mismatch");
  if (schedule.amplitudes().cwiseAbs().maxCoeff() == 0.0)
    throw DegenerateInput("cannot certify an all-zero schedule");

  const int d = controls.dim();
  const int k_count = controls.size();
  const auto basis = GeneratorBasis::gell_mann(d);
  const PropagationResult prop = propagate(controls, schedule);

  std::vector<int> steps;
  Certificate cert;
  for (int n = 0; n < schedule.n_steps(); ++n) {
    if (cost == CertificateCost::time_optimal && !(schedule.envelope(n) > kDegenerateEnvelope)) {
      ++cert.excluded_steps;
      continue;
    }
    steps.push_back(n);
  }
  const auto rows = static_cast<Eigen::Index>(steps.size()) * k_count;
  Eigen::MatrixXd a(rows, basis.size());
  RealVector b(rows);
  Eigen::Index row = 0;
  for (int n : steps) {
    const Matrix& u = prop.unitaries[n].matrix();
    const double scale = cost == CertificateCost::time_optimal ? schedule.envelope(n) : 1.0;
    for (int k = 0; k < k_count; ++k) {
      // 1/2 ReTr(U G_i U^dagger H_k) = 1/2 ReTr(G_i U^dagger H_k U)
      a.row(row) = basis.decompose(u.adjoint() * controls[k].matrix() * u).transpose();
      b[row] = schedule(n, k) / scale;
      ++row;
    }
  }
  const RealVector coeffs = a.completeOrthogonalDecomposition().solve(b);
  cert.g_fit = AdjointMatrix{d, coeffs};
  cert.equations = static_cast<int>(rows);
  cert.residual = std::sqrt((a * coeffs - b).squaredNorm() / static_cast<double>(rows));
  return cert;
}

}  // namespace magicarp
