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

// File formats: schedule / record / Bloch CSVs, report and summary JSON,
// matrix literals.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "magicarp/bench.hpp"
#include "magicarp/propagation.hpp"
#include "magicarp/report.hpp"

namespace magicarp {

using json = nlohmann::json;

/// %.17g, lossless for doubles.
std::string format_double(double value);

/// Header `step,t,u_0,...,u_{K-1},envelope`, one row per step.
void write_schedule_csv(std::ostream& out, const PulseSchedule& schedule);
/// Throws ValidationError naming the offending line.
PulseSchedule read_schedule_csv(std::istream& in);

/// Row-major list of [re, im] pairs.
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

/// {dim, basis: "gell-mann", coeffs: [...]}
json adjoint_to_json(const AdjointMatrix& g);
AdjointMatrix adjoint_from_json(const json& j);

json schedule_to_json(const PulseSchedule& schedule);
PulseSchedule schedule_from_json(const json& j);

/// wall_time is only written when `include_timing` is set, so that repeated
/// runs produce identical files.
json report_to_json(const OptimizationReport& report, bool include_timing = false);
OptimizationReport report_from_json(const json& j);

/// Header `dim,run_index,seed,infidelity,duration_omega,duration_qsl,iterations,converged`.
void write_records_csv(std::ostream& out, const std::vector<BenchmarkRecord>& records);
std::vector<BenchmarkRecord> read_records_csv(std::istream& in);

json summary_to_json(const std::vector<DimensionSummary>& summary);

/// Two columns `duration_qsl infidelity` for one dimension. Infidelities
/// are floored at 1e-16 so the file can go straight onto a log axis.
void write_scatter(std::ostream& out, const std::vector<BenchmarkRecord>& records, int dim);

struct BlochPoint {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Bloch coordinates of U(n dt)|0> for n = 0..N. Requires d = 2.
std::vector<BlochPoint> bloch_trajectory(const ControlSet& controls,
                                         const PulseSchedule& schedule);
void write_bloch_csv(std::ostream& out, const std::vector<BlochPoint>& points);
std::vector<BlochPoint> read_bloch_csv(std::istream& in);

}  // namespace magicarp
