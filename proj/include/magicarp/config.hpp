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

// Run configuration: one JSON file with nested sections. Every key is
// optional and unknown keys are rejected, so a typo never silently falls
// back to a default.
//
//   {
//     "seed": 0,
//     "workers": 4,
//     "target":    {"name": "hadamard", "dim": 2, "entries": [[[1,0],[0,0]], ...]},
//     "controls":  {"rule": "nearest_neighbor", "omega_max": 1.0, "hamiltonians": [...]},
//     "magicarp":  {"mode": "time_optimal_renormalized", "n_steps": 128, ...,
//                   "init": {"kind": "random_normal", "sigma": 1.0}},
//     "grape":     {"n_steps": 2, "penalty_weight": 1e-4, ...,
//                   "init": {"kind": "explicit", "amplitudes": [[...], ...]}},
//     "benchmark": {"dims": [2, 3, 4], "runs_per_dim": 50, "target": "qft",
//                   "control_set": "nearest_neighbor"},
//     "output":    {"dir": "out", "timing": false}
//   }

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "magicarp/bench.hpp"
#include "magicarp/errors.hpp"
#include "magicarp/grape.hpp"
#include "magicarp/io.hpp"
#include "magicarp/qudit.hpp"
#include "magicarp/shooting.hpp"

namespace magicarp {

/// Bad config text or value. The message names the line/column for syntax
/// errors and the dotted field path for schema errors.
class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

struct TargetSpec {
  GateName name = GateName::hadamard;
  int dim = 2;
  std::optional<Matrix> entries;  // custom only

  UnitaryMatrix build() const;
};

struct ControlSpec {
  std::string rule = "nearest_neighbor";  // or "custom"
  double omega_max = 1.0;
  std::vector<Matrix> hamiltonians;  // custom only

  ControlSet build(int dim) const;
};

struct OutputSpec {
  std::string dir = "out";
  bool timing = false;
};

struct RunConfig {
  std::uint64_t seed = 0;
  std::optional<int> workers;
  TargetSpec target;
  ControlSpec controls;
  MagicarpConfig magicarp;
  GrapeConfig grape;
  BenchmarkSpec benchmark;
  OutputSpec output;

  /// Pushes the run seed into the per-algorithm configs.
  void apply_seed(std::uint64_t s);
  /// Cross-section checks: dimensions agree, explicit inits have the right
  /// shape, each sub-config validates.
  void validate() const;
};

RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);
json run_config_to_json(const RunConfig& config);

}  // namespace magicarp
