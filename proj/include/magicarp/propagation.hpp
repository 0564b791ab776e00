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

#include <span>
#include <vector>

#include "magicarp/qudit.hpp"

namespace magicarp {

using AmplitudeArray = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Piecewise-constant amplitudes u_k(n dt) on N uniform steps over the
/// nominal horizon [0, 1]. Row n holds the K amplitudes of step n.
class PulseSchedule {
 public:
  PulseSchedule() = default;
  explicit PulseSchedule(AmplitudeArray amplitudes);

  static PulseSchedule zeros(int n_steps, int n_controls);

  int n_steps() const { return static_cast<int>(amps_.rows()); }
  int n_controls() const { return static_cast<int>(amps_.cols()); }
  double dt() const { return 1.0 / n_steps(); }

  const AmplitudeArray& amplitudes() const { return amps_; }
  std::span<const double> step(int n) const {
    return {amps_.data() + static_cast<std::ptrdiff_t>(n) * n_controls(),
            static_cast<std::size_t>(n_controls())};
  }
  double operator()(int n, int k) const { return amps_(n, k); }

  /// sqrt(sum_k u_k^2) at step n.
  double envelope(int n) const { return amps_.row(n).norm(); }

  /// Same pulse on a grid with every step split into `factor` equal parts.
  PulseSchedule refined(int factor) const;
  /// Steps in reverse order with negated amplitudes; undoes the original.
  PulseSchedule reversed_negated() const;

 private:
  AmplitudeArray amps_;
};

/// Eigendecomposition-based exponential exp(-i dt H) of a Hermitian step
/// generator. The eigen data is kept for Frechet derivatives.
struct StepExponential {
  RealVector eigenvalues;
  Matrix eigenvectors;
  Matrix unitary;

  static StepExponential compute(const Matrix& hermitian, double dt);

  /// Divided differences M_ab of exp(-i dt lambda) over the eigenvalues, so
  /// that the Frechet derivative along X is Q (M o Q^dagger X Q) Q^dagger.
  Matrix divided_differences(double dt) const;

  /// Directional derivative of exp(-i dt H) along the Hermitian direction X.
  Matrix frechet(const Matrix& direction, double dt) const;
};

UnitaryMatrix step_unitary(const ControlSet& controls, std::span<const double> amplitudes,
                           double dt);

struct PropagationResult {
  /// N + 1 unitaries, unitaries[0] = 1 and unitaries[n] = U(n dt).
  std::vector<UnitaryMatrix> unitaries;
  /// c(n dt) for n = 0..N-1.
  std::vector<double> envelope;
  /// dt * sum_n c(n dt) / omega_max: the physical gate time when the drive
  /// runs at omega_max.
  double duration = 0.0;

  const UnitaryMatrix& final_unitary() const { return unitaries.back(); }
};

PropagationResult propagate(const ControlSet& controls, const PulseSchedule& schedule);

/// Final unitary only, without storing the trajectory.
UnitaryMatrix propagate_final(const ControlSet& controls, const PulseSchedule& schedule);

/// dt * sum_n c(n dt) / omega_max
double schedule_duration(const PulseSchedule& schedule, double omega_max);

/// Tr(U_target^dagger U)
cplx trace_overlap(const UnitaryMatrix& target, const UnitaryMatrix& u);

/// |Tr(U_target^dagger U)|^2, in [0, d^2].
double gate_fidelity(const UnitaryMatrix& target, const UnitaryMatrix& u);

/// 1 - |Tr(U_target^dagger U)|^2 / d^2, clamped to [0, 1].
double normalized_infidelity(const UnitaryMatrix& target, const UnitaryMatrix& u);

/// 1 - Re Tr(U_target^dagger U) / d. Phase dependent, kept for comparison
/// with the linear trace cost.
double linear_trace_cost(const UnitaryMatrix& target, const UnitaryMatrix& u);

enum class AdjointIntegrator {
  exact_step,      // lambda_{n+1} = exp(-i dt H_n) lambda_n
  explicit_euler,  // lambda_{n+1} = (1 - i dt H_n) lambda_n
};

/// Integrates d(lambda)/dt = -i H(t) lambda from lambda(0) = i g along the
/// schedule and returns max_n ||lambda(n dt) - U(n dt) i g||_F.
double verify_adjoint_constancy(const ControlSet& controls, const PulseSchedule& schedule,
                                const AdjointMatrix& g,
                                AdjointIntegrator integrator = AdjointIntegrator::exact_step);

}  // namespace magicarp
