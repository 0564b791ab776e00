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

#include "magicarp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "magicarp/errors.hpp"

namespace magicarp {

double tau_qsl(int dim, double omega_max) {
  if (dim < 2) throw InvalidDimension("tau_qsl needs d >= 2");
  if (!(omega_max > 0.0) || !std::isfinite(omega_max))
    throw ValidationError("omega_max must be positive");
  return std::numbers::pi / omega_max * (1.0 - 1.0 / dim);
}

ControlSet make_control_set(const std::string& rule, int dim, double omega_max) {
  if (rule == "nearest_neighbor") return nearest_neighbor_control_set(dim, omega_max);
  throw ValidationError("unknown control set rule '" + rule + "'");
}

void BenchmarkSpec::validate() const {
  if (dims.empty()) throw ValidationError("benchmark needs at least one dimension");
  for (int d : dims)
    if (d < 2) throw ValidationError("benchmark dimensions must be >= 2");
  if (runs_per_dim < 1) throw ValidationError("runs_per_dim must be >= 1");
  if (target == GateName::custom) throw ValidationError("benchmark target cannot be custom");
  if (!(omega_max > 0.0)) throw ValidationError("omega_max must be positive");
  make_control_set(control_set, 2, omega_max);
  magicarp.validate();
  if (std::holds_alternative<ExplicitInit>(magicarp.init))
    throw ValidationError("benchmark runs need a random init");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

BenchmarkRecord run_one(const BenchmarkSpec& spec, int dim, int run_index) {
  BenchmarkRecord rec;
  rec.dim = dim;
  rec.run_index = run_index;
  rec.seed = derive_seed(spec.base_seed, dim, run_index);
  try {
    MagicarpConfig config = spec.magicarp;
    config.seed = rec.seed;
    const ShootingContext ctx(make_control_set(spec.control_set, dim, spec.omega_max),
                              target_gate(spec.target, dim), config);
    const OptimizationReport report = optimize(ctx, config);
    rec.infidelity = report.infidelity;
    rec.duration_omega = report.duration;
    rec.duration_qsl = report.duration_qsl;
    rec.iterations = report.iterations;
    rec.converged = report.converged;
  } catch (const Error&) {
    rec.converged = false;
  }
  return rec;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base_seed, int dim, int run_index) {
  std::uint64_t h = splitmix64(base_seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(dim));
  return splitmix64(h ^ static_cast<std::uint64_t>(run_index));
}

std::vector<BenchmarkRecord> run_campaign(const BenchmarkSpec& spec, int workers) {
  spec.validate();
  std::vector<int> dims = spec.dims;
  std::sort(dims.begin(), dims.end());
  dims.erase(std::unique(dims.begin(), dims.end()), dims.end());

  std::vector<std::pair<int, int>> jobs;
  for (int d : dims)
    for (int r = 0; r < spec.runs_per_dim; ++r) jobs.emplace_back(d, r);

  // Each job writes only its own slot, so the output is independent of the
  // number of workers and of scheduling order.
  std::vector<BenchmarkRecord> records(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++)
      records[i] = run_one(spec, jobs[i].first, jobs[i].second);
  };
  const int n_threads = std::clamp(workers, 1, static_cast<int>(jobs.size()));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  return records;
}

std::optional<double> minimal_duration(const std::vector<BenchmarkRecord>& records, int dim,
                                       double threshold) {
  std::optional<double> best;
  for (const auto& r : records) {
    if (r.dim != dim || !(r.infidelity <= threshold)) continue;
    if (!best || r.duration_qsl < *best) best = r.duration_qsl;
  }
  return best;
}

std::vector<DimensionSummary> summarize(const std::vector<BenchmarkRecord>& records,
                                        const std::vector<int>& dims, double threshold) {
  std::vector<DimensionSummary> out;
  for (int d : dims) {
    DimensionSummary s;
    s.dim = d;
    std::vector<double> durations;
    for (const auto& r : records) {
      if (r.dim != d) continue;
      ++s.runs;
      if (r.converged) {
        ++s.converged;
        durations.push_back(r.duration_qsl);
      }
    }
    s.success_rate = s.runs ? static_cast<double>(s.converged) / s.runs : 0.0;
    s.minimal_duration = minimal_duration(records, d, threshold);
    if (!durations.empty()) {
      std::sort(durations.begin(), durations.end());
      const std::size_t m = durations.size() / 2;
      s.median_duration = durations.size() % 2 ? durations[m]
                                               : 0.5 * (durations[m - 1] + durations[m]);
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace magicarp
