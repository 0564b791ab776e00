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
#include <optional>
#include <string>
#include <vector>

#include "magicarp/qudit.hpp"
#include "magicarp/shooting.hpp"

namespace magicarp {

/// Speed-limit time of QFT(d) under unconstrained drive:
/// (pi / omega_max) (1 - 1/d).
double tau_qsl(int dim, double omega_max = 1.0);

/// Control-set rule by name. Only "nearest_neighbor" is defined.
ControlSet make_control_set(const std::string& rule, int dim, double omega_max = 1.0);

struct BenchmarkSpec {
  std::vector<int> dims{2, 3, 4, 5, 6};
  int runs_per_dim = 300;
  GateName target = GateName::qft;
  std::string control_set = "nearest_neighbor";
  double omega_max = 1.0;
  MagicarpConfig magicarp;
  std::uint64_t base_seed = 0;

  void validate() const;
};

struct BenchmarkRecord {
  int dim = 0;
  int run_index = 0;
  std::uint64_t seed = 0;
  double infidelity = 1.0;
  double duration_omega = 0.0;
  double duration_qsl = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Stable 64-bit mix of (base_seed, dim, run_index).
std::uint64_t derive_seed(std::uint64_t base_seed, int dim, int run_index);

/// Runs every (dim, run_index) pair, possibly on several worker threads.
/// Records come back sorted by (dim, run_index); failed runs are kept with
/// converged = false.
std::vector<BenchmarkRecord> run_campaign(const BenchmarkSpec& spec, int workers = 1);

/// Smallest duration_qsl among records of `dim` with infidelity <= threshold.
std::optional<double> minimal_duration(const std::vector<BenchmarkRecord>& records, int dim,
                                       double threshold = 1e-7);

struct DimensionSummary {
  int dim = 0;
  int runs = 0;
  int converged = 0;
  double success_rate = 0.0;
  std::optional<double> minimal_duration;
  /// Median duration_qsl over converged runs.
  std::optional<double> median_duration;
};

std::vector<DimensionSummary> summarize(const std::vector<BenchmarkRecord>& records,
                                        const std::vector<int>& dims,
                                        double threshold = 1e-7);

}  // namespace magicarp
