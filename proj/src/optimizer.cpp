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

#include "magicarp/optimizer.hpp"

#include <cmath>
#include <limits>

#include "magicarp/errors.hpp"

namespace magicarp {

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::converged: return "converged";
    case StopReason::stalled: return "stalled";
    case StopReason::stationary: return "stationary";
    case StopReason::max_iters: return "max_iters";
    case StopReason::line_search_failed: return "line_search_failed";
    case StopReason::error: return "error";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_value(const DescentProblem& problem, const RealVector& x) {
  try {
    const double f = problem.value(x);
    return std::isfinite(f) ? f : kInf;
  } catch (const DegenerateEnvelope&) {
    return kInf;
  } catch (const NonFiniteError&) {
    return kInf;
  }
}

struct LineSearchStep {
  double alpha = 0.0;
  double value = kInf;
  bool ok = false;
};

LineSearchStep backtrack(const DescentProblem& problem, const RealVector& x, double f,
                         const RealVector& grad, const RealVector& dir,
                         const DescentOptions& opt) {
  const double slope = grad.dot(dir);
  double alpha = 1.0;
  for (int i = 0; i <= opt.max_backtracks; ++i) {
    const double trial = safe_value(problem, x + alpha * dir);
    if (trial <= f + opt.armijo_c * alpha * slope) return {alpha, trial, true};
    alpha *= opt.shrink;
  }
  return {};
}

}  // namespace

DescentResult minimize_bfgs(const DescentProblem& problem, RealVector x0,
                            const DescentOptions& opt) {
  DescentResult out;
  const Eigen::Index n = x0.size();
  out.x = std::move(x0);
  out.value = problem.value(out.x);
  if (!std::isfinite(out.value)) throw NonFiniteError("objective is not finite at the start point");
  out.trace.push_back(out.value);

  auto reached_target = [&](double f) { return opt.target && f <= *opt.target; };
  if (reached_target(out.value)) {
    out.reason = StopReason::converged;
    return out;
  }

  Eigen::MatrixXd inv_hessian = Eigen::MatrixXd::Identity(n, n);
  bool scaled = false;
  RealVector grad;
  try {
    grad = problem.gradient(out.x);
  } catch (const Error& e) {
    out.reason = StopReason::error;
    out.message = e.what();
    return out;
  }

  out.reason = StopReason::max_iters;
  while (out.iterations < opt.max_iters) {
    if (grad.norm() <= opt.grad_tol) {
      out.reason = StopReason::stationary;
      break;
    }
    RealVector dir = -(inv_hessian * grad);
    if (!(grad.dot(dir) < 0.0)) {
      inv_hessian.setIdentity();
      scaled = false;
      dir = -grad;
    }
    LineSearchStep step = backtrack(problem, out.x, out.value, grad, dir, opt);
    if (!step.ok && scaled) {
      // curvature model went bad; retry along steepest descent
      inv_hessian.setIdentity();
      scaled = false;
      dir = -grad;
      step = backtrack(problem, out.x, out.value, grad, dir, opt);
    }
    if (!step.ok) {
      out.reason = StopReason::line_search_failed;
      break;
    }

    const RealVector s = step.alpha * dir;
    out.x += s;
    out.value = step.value;
    out.trace.push_back(out.value);
    ++out.iterations;

    if (reached_target(out.value)) {
      out.reason = StopReason::converged;
      break;
    }
    const auto w = static_cast<std::size_t>(opt.stall_window);
    if (out.trace.size() > w) {
      const double old = out.trace[out.trace.size() - 1 - w];
      if (old - out.value <= opt.stall_tol * std::max(std::abs(old), 1e-300)) {
        out.reason = StopReason::stalled;
        break;
      }
    }

    RealVector next_grad;
    try {
      next_grad = problem.gradient(out.x);
    } catch (const Error& e) {
      out.reason = StopReason::error;
      out.message = e.what();
      break;
    }
    const RealVector y = next_grad - grad;
    grad = std::move(next_grad);
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (!scaled) {
        inv_hessian = (sy / y.squaredNorm()) * Eigen::MatrixXd::Identity(n, n);
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const RealVector hy = inv_hessian * y;
      // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T, expanded
      inv_hessian += (rho * rho * y.dot(hy) + rho) * (s * s.transpose()) -
                     rho * (hy * s.transpose() + s * hy.transpose());
    }
  }
  return out;
}

}  // namespace magicarp
