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

#include "magicarp/propagation.hpp"

#include <algorithm>
#include <cmath>

#include "magicarp/errors.hpp"

namespace magicarp {

PulseSchedule::PulseSchedule(AmplitudeArray amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.rows() < 1) throw ValidationError("schedule needs at least one step");
  if (amps_.cols() < 1) throw ValidationError("schedule needs at least one control");
  if (!amps_.allFinite()) throw NonFiniteError("schedule has non-finite amplitudes");
}

PulseSchedule PulseSchedule::zeros(int n_steps, int n_controls) {
  if (n_steps < 1 || n_controls < 1)
    throw ValidationError("schedule needs n_steps >= 1 and n_controls >= 1");
  return PulseSchedule(AmplitudeArray::Zero(n_steps, n_controls));
}

PulseSchedule PulseSchedule::refined(int factor) const {
  if (factor < 1) throw ValidationError("refinement factor must be >= 1");
  AmplitudeArray out(n_steps() * factor, n_controls());
  for (int n = 0; n < n_steps(); ++n)
    for (int r = 0; r < factor; ++r) out.row(n * factor + r) = amps_.row(n);
  return PulseSchedule(std::move(out));
}

PulseSchedule PulseSchedule::reversed_negated() const {
  AmplitudeArray out(n_steps(), n_controls());
  for (int n = 0; n < n_steps(); ++n) out.row(n) = -amps_.row(n_steps() - 1 - n);
  return PulseSchedule(std::move(out));
}

StepExponential StepExponential::compute(const Matrix& hermitian, double dt) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian);
  if (solver.info() != Eigen::Success) throw Error("eigendecomposition failed");
  StepExponential s;
  s.eigenvalues = solver.eigenvalues();
  s.eigenvectors = solver.eigenvectors();
  Eigen::VectorXcd phases(s.eigenvalues.size());
  for (Eigen::Index a = 0; a < phases.size(); ++a)
    phases[a] = std::polar(1.0, -dt * s.eigenvalues[a]);
  s.unitary = s.eigenvectors * phases.asDiagonal() * s.eigenvectors.adjoint();
  return s;
}

Matrix StepExponential::divided_differences(double dt) const {
  const Eigen::Index d = eigenvalues.size();
  Matrix m(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      const double delta = eigenvalues[a] - eigenvalues[b];
      const cplx eb = std::polar(1.0, -dt * eigenvalues[b]);
      if (delta == 0.0) {
        m(a, b) = cplx(0.0, -dt) * eb;
      } else {
        // (e_a - e_b) / delta with e_a - e_b = e_b (exp(i theta) - 1)
        const double theta = -dt * delta;
        const double half = std::sin(0.5 * theta);
        m(a, b) = eb * cplx(-2.0 * half * half, std::sin(theta)) / delta;
      }
    }
  }
  return m;
}

Matrix StepExponential::frechet(const Matrix& direction, double dt) const {
  const Matrix x = eigenvectors.adjoint() * direction * eigenvectors;
  return eigenvectors * divided_differences(dt).cwiseProduct(x) * eigenvectors.adjoint();
}

namespace {

void check_step(const ControlSet& controls, std::span<const double> amplitudes, double dt) {
  if (static_cast<int>(amplitudes.size()) != controls.size())
    throw DimensionMismatch("amplitude count does not match control count");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("time step must be positive");
  for (double u : amplitudes)
    if (!std::isfinite(u)) throw NonFiniteError("non-finite control amplitude");
}

void check_schedule(const ControlSet& controls, const PulseSchedule& schedule) {
  if (schedule.n_controls() != controls.size())
    throw DimensionMismatch("schedule has " + std::to_string(schedule.n_controls()) +
                            " controls, control set has " + std::to_string(controls.size()));
}

}  // namespace

UnitaryMatrix step_unitary(const ControlSet& controls, std::span<const double> amplitudes,
                           double dt) {
  check_step(controls, amplitudes, dt);
  const Matrix h = controls.combine(amplitudes.data());
  return UnitaryMatrix::unchecked(StepExponential::compute(h, dt).unitary);
}

PropagationResult propagate(const ControlSet& controls, const PulseSchedule& schedule) {
  check_schedule(controls, schedule);
  const int n_steps = schedule.n_steps();
  const double dt = schedule.dt();
  PropagationResult result;
  result.unitaries.reserve(n_steps + 1);
  result.envelope.reserve(n_steps);
  result.unitaries.push_back(UnitaryMatrix::identity(controls.dim()));
  for (int n = 0; n < n_steps; ++n) {
    const UnitaryMatrix e = step_unitary(controls, schedule.step(n), dt);
    result.unitaries.push_back(e * result.unitaries.back());
    result.envelope.push_back(schedule.envelope(n));
  }
  result.duration = schedule_duration(schedule, controls.omega_max());
  return result;
}

UnitaryMatrix propagate_final(const ControlSet& controls, const PulseSchedule& schedule) {
  check_schedule(controls, schedule);
  const double dt = schedule.dt();
  Matrix u = Matrix::Identity(controls.dim(), controls.dim());
  for (int n = 0; n < schedule.n_steps(); ++n)
    u = step_unitary(controls, schedule.step(n), dt).matrix() * u;
  return UnitaryMatrix::unchecked(std::move(u));
}

double schedule_duration(const PulseSchedule& schedule, double omega_max) {
  double sum = 0.0;
  for (int n = 0; n < schedule.n_steps(); ++n) sum += schedule.envelope(n);
  return schedule.dt() * sum / omega_max;
}

cplx trace_overlap(const UnitaryMatrix& target, const UnitaryMatrix& u) {
  if (target.dim() != u.dim()) throw DimensionMismatch("fidelity: dimension mismatch");
  return (target.matrix().conjugate().cwiseProduct(u.matrix())).sum();
}

double gate_fidelity(const UnitaryMatrix& target, const UnitaryMatrix& u) {
  return std::norm(trace_overlap(target, u));
}

double normalized_infidelity(const UnitaryMatrix& target, const UnitaryMatrix& u) {
  const double d = target.dim();
  return std::clamp(1.0 - gate_fidelity(target, u) / (d * d), 0.0, 1.0);
}

double linear_trace_cost(const UnitaryMatrix& target, const UnitaryMatrix& u) {
  return 1.0 - trace_overlap(target, u).real() / target.dim();
}

double verify_adjoint_constancy(const ControlSet& controls, const PulseSchedule& schedule,
                                const AdjointMatrix& g, AdjointIntegrator integrator) {
  check_schedule(controls, schedule);
  if (g.dim != controls.dim()) throw DimensionMismatch("adjoint matrix dimension mismatch");
  const int d = controls.dim();
  const double dt = schedule.dt();
  const Matrix lambda0 = cplx(0.0, 1.0) * g.matrix();
  Matrix lambda = lambda0;
  Matrix u = Matrix::Identity(d, d);
  double residual = 0.0;
  for (int n = 0; n < schedule.n_steps(); ++n) {
    const Matrix h = controls.combine(schedule.step(n).data());
    const Matrix e = StepExponential::compute(h, dt).unitary;
    u = e * u;
    if (integrator == AdjointIntegrator::exact_step)
      lambda = e * lambda;
    else
      lambda = lambda - cplx(0.0, dt) * (h * lambda);
    residual = std::max(residual, (lambda - u * lambda0).norm());
  }
  return residual;
}

}  // namespace magicarp
