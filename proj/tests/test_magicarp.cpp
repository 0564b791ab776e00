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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "magicarp/bench.hpp"
#include "magicarp/errors.hpp"
#include "magicarp/shooting.hpp"
#include "oracles.hpp"

using namespace magicarp;

namespace {

const cplx I(0.0, 1.0);

// Independent construction: amplitudes from U g U^dagger, steps from the
// Taylor exponential. Returns the amplitudes and the projected norms.
struct Reference {
  AmplitudeArray amps;
  std::vector<double> projected_norm;
};

Reference reference_pulse(const Matrix& g, const ControlSet& c, int n_steps, PulseMode mode) {
  const int d = c.dim();
  Reference r;
  r.amps.resize(n_steps, c.size());
  Matrix u = Matrix::Identity(d, d);
  double c0 = 0.0;
  for (int n = 0; n < n_steps; ++n) {
    const Matrix rot = u * g * u.adjoint();
    RealVector a(c.size());
    for (int k = 0; k < c.size(); ++k) a[k] = 0.5 * (rot * c[k].matrix()).trace().real();
    r.projected_norm.push_back(a.norm());
    if (mode == PulseMode::time_optimal_renormalized) {
      if (n == 0) c0 = a.norm();
      a *= c0 / a.norm();
    }
    r.amps.row(n) = a.transpose();
    Matrix h = Matrix::Zero(d, d);
    for (int k = 0; k < c.size(); ++k) h += a[k] * c[k].matrix();
    u = oracle::expm(-I * h / static_cast<double>(n_steps)) * u;
  }
  return r;
}

MagicarpConfig config_with(PulseMode mode, int n_steps, std::uint64_t seed = 0) {
  MagicarpConfig c;
  c.mode = mode;
  c.n_steps = n_steps;
  c.seed = seed;
  return c;
}

RealVector random_coeffs(int count, std::mt19937_64& rng, double sigma = 1.0) {
  std::normal_distribution<double> normal(0.0, sigma);
  RealVector c(count);
  for (auto& x : c) x = normal(rng);
  return c;
}

}  // namespace

TEST_CASE("zero adjoint matrix gives the trivial pulse") {
  const ControlSet c = nearest_neighbor_control_set(3);
  const ConstructedPulse p =
      pulses_from_adjoint(AdjointMatrix::zero(3), c, 10, PulseMode::energy_optimal);
  CHECK(p.schedule.amplitudes().norm() == 0.0);
  CHECK((p.propagation.final_unitary().matrix() - Matrix::Identity(3, 3)).norm() == 0.0);
  CHECK(normalized_infidelity(UnitaryMatrix::identity(3), p.propagation.final_unitary()) == 0.0);
  CHECK(p.propagation.unitaries.size() == 11);
}

TEST_CASE("first amplitudes are the projections of g") {
  const ControlSet c = nearest_neighbor_control_set(2);
  const AdjointMatrix gx = AdjointMatrix::from_matrix(c[0]);
  const ConstructedPulse p = pulses_from_adjoint(gx, c, 4, PulseMode::energy_optimal);
  CHECK(p.schedule(0, 0) == doctest::Approx(1.0));
  CHECK(p.schedule(0, 1) == doctest::Approx(0.0));

  // Scaling covariance of the first step.
  std::mt19937_64 rng(2);
  const AdjointMatrix g{2, random_coeffs(3, rng)};
  const ConstructedPulse base = pulses_from_adjoint(g, c, 8, PulseMode::energy_optimal);
  for (double s : {0.25, 3.0}) {
    const AdjointMatrix gs{2, s * g.coeffs};
    const ConstructedPulse p2 = pulses_from_adjoint(gs, c, 8, PulseMode::energy_optimal);
    for (int k = 0; k < 2; ++k)
      CHECK(p2.schedule(0, k) == doctest::Approx(s * base.schedule(0, k)).epsilon(1e-14));
  }
}

TEST_CASE("sigma_z adjoint matrix never drives sigma_x, sigma_y") {
  const ControlSet c = nearest_neighbor_control_set(2);
  const AdjointMatrix gz{2, (RealVector(3) << 0.0, 0.0, 1.7).finished()};
  const ConstructedPulse p = pulses_from_adjoint(gz, c, 64, PulseMode::energy_optimal);
  const Reference r = reference_pulse(gz.matrix(), c, 64, PulseMode::energy_optimal);
  CHECK(r.amps.norm() == 0.0);
  CHECK(p.schedule.amplitudes().norm() == 0.0);
  CHECK_THROWS_AS(pulses_from_adjoint(gz, c, 64, PulseMode::time_optimal_renormalized),
                  DegenerateEnvelope);
  try {
    pulses_from_adjoint(gz, c, 64, PulseMode::time_optimal_renormalized);
  } catch (const DegenerateEnvelope& e) {
    CHECK(e.step() == 0);
  }
}

TEST_CASE("construction matches the independent reference") {
  std::mt19937_64 rng(31);
  for (int d = 2; d <= 3; ++d) {
    const ControlSet c = nearest_neighbor_control_set(d);
    for (PulseMode mode : {PulseMode::energy_optimal, PulseMode::time_optimal_renormalized}) {
      const AdjointMatrix g{d, random_coeffs(d * d - 1, rng)};
      const ConstructedPulse p = pulses_from_adjoint(g, c, 40, mode);
      const Reference r = reference_pulse(g.matrix(), c, 40, mode);
      CHECK((p.schedule.amplitudes() - r.amps).norm() <= 1e-11);
      CHECK(p.propagation.unitaries.size() == 41);
      if (mode == PulseMode::time_optimal_renormalized) {
        // Envelope held at its initial value.
        for (int n = 0; n < 40; ++n)
          CHECK(p.schedule.envelope(n) == doctest::Approx(r.projected_norm[0]).epsilon(1e-13));
        CHECK(p.propagation.duration == doctest::Approx(r.projected_norm[0]).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("objective examples") {
  const ControlSet c = nearest_neighbor_control_set(2);
  const ShootingContext id(c, UnitaryMatrix::identity(2), config_with(PulseMode::energy_optimal, 32));
  CHECK(objective(RealVector::Zero(3), id) == 0.0);
  // The Hadamard is traceless, so the identity has zero overlap with it.
  const ShootingContext had(c, target_gate(GateName::hadamard, 2),
                            config_with(PulseMode::energy_optimal, 32));
  CHECK(objective(RealVector::Zero(3), had) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(objective(RealVector::Zero(4), had), DimensionMismatch);

  std::mt19937_64 rng(37);
  const RealVector x = random_coeffs(3, rng);
  const Reference r = reference_pulse(had.basis.reconstruct(x), c, 32, PulseMode::energy_optimal);
  const Matrix u = oracle::propagate(c, PulseSchedule(r.amps));
  CHECK(objective(x, had) ==
        doctest::Approx(oracle::infidelity(had.target.matrix(), u)).epsilon(1e-10));
}

TEST_CASE("gradient examples") {
  const ControlSet c = nearest_neighbor_control_set(2);
  const ShootingContext id(c, UnitaryMatrix::identity(2), config_with(PulseMode::energy_optimal, 32));
  const RealVector g0 = gradient(RealVector::Zero(3), id);
  CHECK(g0.size() == 3);
  CHECK(g0.norm() <= 1e-9);

  std::mt19937_64 rng(41);
  const ShootingContext had(c, target_gate(GateName::qft, 2),
                            config_with(PulseMode::energy_optimal, 32));
  for (int t = 0; t < 5; ++t) {
    const RealVector x = random_coeffs(3, rng);
    const RealVector central = gradient(x, had);
    // Forward differences with h' = 1e-5 agree to O(h').
    const double f0 = objective(x, had);
    for (int i = 0; i < 3; ++i) {
      RealVector p = x;
      p[i] += 1e-5;
      CHECK(std::abs((objective(p, had) - f0) / 1e-5 - central[i]) <= 1e-3);
    }
  }
}

TEST_CASE("central differences agree with the five-point stencil") {
  std::mt19937_64 rng(43);
  for (int d = 2; d <= 3; ++d) {
    const ControlSet c = nearest_neighbor_control_set(d);
    for (PulseMode mode : {PulseMode::energy_optimal, PulseMode::time_optimal_renormalized}) {
      for (int t = 0; t < 3; ++t) {
        const RealVector x = random_coeffs(d * d - 1, rng, 0.7);
        // Truncation regime: the gap between the stencils is O(h^2).
        for (double h : {1e-3, 3e-4}) {
          MagicarpConfig cfg = config_with(mode, 48);
          cfg.grad_step = h;
          const ShootingContext ctx(c, target_gate(GateName::qft, d), cfg);
          const RealVector central = gradient(x, ctx);
          const RealVector five =
              oracle::five_point([&](const RealVector& y) { return objective(y, ctx); }, x, h);
          CHECK((central - five).norm() <= 10.0 * h * h * std::max(five.norm(), 1.0));
        }
        // Default step: the library gradient matches an accurate stencil.
        const ShootingContext ctx(c, target_gate(GateName::qft, d), config_with(mode, 48));
        const RealVector central = gradient(x, ctx);
        const RealVector five =
            oracle::five_point([&](const RealVector& y) { return objective(y, ctx); }, x, 1e-3);
        CHECK((central - five).norm() <= 1e-7 * std::max(five.norm(), 1.0));
      }
    }
  }
}

TEST_CASE("parameter count is d^2 - 1") {
  for (int d = 2; d <= 6; ++d) {
    const ShootingContext ctx(nearest_neighbor_control_set(d), qft(d),
                              config_with(PulseMode::energy_optimal, 8));
    CHECK(ctx.parameter_count() == d * d - 1);
    CHECK(initial_coefficients(MagicarpConfig{}, d).size() == d * d - 1);
  }
  MagicarpConfig cfg = config_with(PulseMode::energy_optimal, 8);
  cfg.max_iters = 2;
  const ShootingContext ctx(nearest_neighbor_control_set(4), qft(4), cfg);
  const OptimizationReport r = optimize(ctx, cfg);
  CHECK(r.parameter_count == 15);
  REQUIRE(r.final_g);
  CHECK(r.final_g->coeffs.size() == 15);
}

TEST_CASE("config validation and init") {
  MagicarpConfig c;
  CHECK_NOTHROW(c.validate());
  c.n_steps = 0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = MagicarpConfig{};
  c.grad_step = 0.0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = MagicarpConfig{};
  c.convergence_tol = -1.0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = MagicarpConfig{};
  c.init = ExplicitInit{(RealVector(3) << 1.0, 2.0, 3.0).finished()};
  CHECK(initial_coefficients(c, 2) == (RealVector(3) << 1.0, 2.0, 3.0).finished());
  CHECK_THROWS_AS(initial_coefficients(c, 3), ValidationError);
  c = MagicarpConfig{};
  c.seed = 99;
  CHECK(initial_coefficients(c, 3) == initial_coefficients(c, 3));
  CHECK(parse_pulse_mode("time_optimal_renormalized") == PulseMode::time_optimal_renormalized);
  CHECK(to_string(PulseMode::energy_optimal) == "energy_optimal");
  CHECK_THROWS_AS(parse_pulse_mode("fast"), ValidationError);
}

TEST_CASE("optimize reaches the identity and is deterministic") {
  const ControlSet c = nearest_neighbor_control_set(2);
  const MagicarpConfig cfg = config_with(PulseMode::energy_optimal, 32, 5);
  const ShootingContext ctx(c, UnitaryMatrix::identity(2), cfg);
  const OptimizationReport a = optimize(ctx, cfg);
  CHECK(a.converged);
  CHECK(a.infidelity <= 1e-7);
  CHECK(a.stop_reason == StopReason::converged);
  CHECK(a.algorithm == "magicarp");
  const OptimizationReport b = optimize(ctx, cfg);
  CHECK(a.cost_trace == b.cost_trace);
  CHECK(a.final_g->coeffs == b.final_g->coeffs);
  for (std::size_t i = 1; i < a.cost_trace.size(); ++i)
    CHECK(a.cost_trace[i] <= a.cost_trace[i - 1]);
  CHECK(a.infidelity == a.cost_trace.back());
}

TEST_CASE("Hadamard time-optimal reference run lands near 1.25 tau_QSL") {
  const ControlSet c = nearest_neighbor_control_set(2);
  const MagicarpConfig cfg = config_with(PulseMode::time_optimal_renormalized, 128, 0);
  const ShootingContext ctx(c, target_gate(GateName::hadamard, 2), cfg);
  const OptimizationReport r = optimize(ctx, cfg);
  CHECK(r.converged);
  CHECK(r.duration_qsl >= 1.20);
  CHECK(r.duration_qsl <= 1.30);
  CHECK(r.duration_qsl == doctest::Approx(r.duration / tau_qsl(2)).epsilon(1e-14));
  for (std::size_t i = 1; i < r.cost_trace.size(); ++i)
    CHECK(r.cost_trace[i] <= r.cost_trace[i - 1]);
}

TEST_CASE("certificate recovers g on energy-optimal pulses") {
  std::mt19937_64 rng(47);
  for (int d = 2; d <= 3; ++d) {
    const ControlSet c = nearest_neighbor_control_set(d);
    for (int t = 0; t < 3; ++t) {
      const AdjointMatrix g{d, random_coeffs(d * d - 1, rng)};
      const ConstructedPulse p = pulses_from_adjoint(g, c, 64, PulseMode::energy_optimal);
      const Certificate cert =
          optimality_certificate(p.schedule, c, CertificateCost::energy_optimal);
      CHECK(cert.residual <= 1e-6);
      CHECK((cert.g_fit.coeffs - g.coeffs).norm() <= 1e-8 * g.coeffs.norm());
      CHECK(cert.equations == 64 * c.size());
    }
  }
}

TEST_CASE("time-cost certificate residual is bounded by the envelope drift") {
  std::mt19937_64 rng(53);
  const ControlSet c = nearest_neighbor_control_set(2);
  int near_unit = 0;
  for (double scale : {1e-3, 0.02, 0.3, 1.0}) {
    const AdjointMatrix g{2, random_coeffs(3, rng, scale)};
    const ConstructedPulse p = pulses_from_adjoint(g, c, 64, PulseMode::time_optimal_renormalized);
    const Reference r = reference_pulse(g.matrix(), c, 64, PulseMode::time_optimal_renormalized);
    double drift = 0.0;
    for (double nrm : r.projected_norm) drift = std::max(drift, std::abs(1.0 - nrm / r.projected_norm[0]));
    const Certificate cert = optimality_certificate(p.schedule, c);
    CHECK(cert.residual <= drift + 1e-12);
    if (drift <= 1e-7) {
      ++near_unit;
      // Near-unit renormalization: certified, and g_fit is g up to scale.
      CHECK(cert.residual <= 1e-6);
      const double s = cert.g_fit.coeffs.dot(g.coeffs) / g.coeffs.squaredNorm();
      CHECK((cert.g_fit.coeffs - s * g.coeffs).norm() <= 1e-5 * cert.g_fit.coeffs.norm());
    }
  }
  CHECK(near_unit >= 1);
}

TEST_CASE("certificate rejects a bang-bang Hadamard") {
  // Ry(pi/2) on the first half, Rx(pi) on the second: the Hadamard up to phase.
  const ControlSet c = nearest_neighbor_control_set(2);
  AmplitudeArray a(2, 2);
  a << 0.0, std::numbers::pi / 2, std::numbers::pi, 0.0;
  const PulseSchedule s(a);
  CHECK(normalized_infidelity(target_gate(GateName::hadamard, 2), propagate_final(c, s)) <= 1e-15);
  const Certificate cert = optimality_certificate(s, c);
  CHECK(cert.residual >= 1e-2);
}

TEST_CASE("certificate edge cases") {
  const ControlSet c = nearest_neighbor_control_set(2);
  CHECK_THROWS_AS(optimality_certificate(PulseSchedule::zeros(4, 2), c), DegenerateInput);
  CHECK_THROWS_AS(optimality_certificate(PulseSchedule::zeros(4, 3), c), DimensionMismatch);

  // Single step with u = 1/2 ReTr(g H_k): exact fit.
  std::mt19937_64 rng(59);
  const AdjointMatrix g{2, random_coeffs(3, rng)};
  const ConstructedPulse p = pulses_from_adjoint(g, c, 1, PulseMode::energy_optimal);
  CHECK(optimality_certificate(p.schedule, c).residual <= 1e-14);
  CHECK(optimality_certificate(p.schedule, c, CertificateCost::energy_optimal).residual <= 1e-14);

  // Zero-envelope steps are skipped and counted under the time cost.
  AmplitudeArray a = AmplitudeArray::Zero(4, 2);
  a(0, 0) = 1.0;
  a(2, 1) = 0.5;
  const Certificate cert = optimality_certificate(PulseSchedule(a), c);
  CHECK(cert.excluded_steps == 2);
  CHECK(cert.equations == 4);
  CHECK(parse_certificate_cost("energy") == CertificateCost::energy_optimal);
  CHECK(parse_certificate_cost("time") == CertificateCost::time_optimal);
}
