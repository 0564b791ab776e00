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

#include "magicarp/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "magicarp/errors.hpp"

namespace magicarp {

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string strip(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  return s.substr(i);
}

[[noreturn]] void csv_error(int line, const std::string& what) {
  throw ValidationError("line " + std::to_string(line) + ": " + what);
}

double parse_number(const std::string& field, int line) {
  const std::string s = strip(field);
  if (s.empty()) csv_error(line, "empty field");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE) csv_error(line, "bad number '" + s + "'");
  if (!std::isfinite(v)) csv_error(line, "non-finite number '" + s + "'");
  return v;
}

long long parse_integer(const std::string& field, int line) {
  const std::string s = strip(field);
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
    csv_error(line, "bad integer '" + s + "'");
  return v;
}

// Reads the header and the non-blank data lines; `line_numbers` holds the
// 1-based file line of each data row.
std::vector<std::vector<std::string>> read_table(std::istream& in,
                                                 std::vector<std::string>& header,
                                                 std::vector<int>& line_numbers) {
  std::string line;
  int line_no = 0;
  bool have_header = false;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip(line);
    if (line.empty()) continue;
    if (!have_header) {
      header = split_csv(line);
      for (auto& h : header) h = strip(h);
      have_header = true;
      continue;
    }
    auto fields = split_csv(line);
    if (fields.size() != header.size())
      csv_error(line_no, "expected " + std::to_string(header.size()) + " fields, got " +
                             std::to_string(fields.size()));
    rows.push_back(std::move(fields));
    line_numbers.push_back(line_no);
  }
  if (!have_header) throw ValidationError("empty file: missing header");
  return rows;
}

}  // namespace

void write_schedule_csv(std::ostream& out, const PulseSchedule& schedule) {
  out << "step,t";
  for (int k = 0; k < schedule.n_controls(); ++k) out << ",u_" << k;
  out << ",envelope\n";
  for (int n = 0; n < schedule.n_steps(); ++n) {
    out << n << ',' << format_double(n * schedule.dt());
    for (int k = 0; k < schedule.n_controls(); ++k) out << ',' << format_double(schedule(n, k));
    out << ',' << format_double(schedule.envelope(n)) << '\n';
  }
}

PulseSchedule read_schedule_csv(std::istream& in) {
  std::vector<std::string> header;
  std::vector<int> lines;
  const auto rows = read_table(in, header, lines);
  if (header.size() < 4 || header[0] != "step" || header[1] != "t" ||
      header.back() != "envelope")
    csv_error(1, "expected header step,t,u_0,...,u_{K-1},envelope");
  const int k_count = static_cast<int>(header.size()) - 3;
  for (int k = 0; k < k_count; ++k)
    if (header[2 + k] != "u_" + std::to_string(k))
      csv_error(1, "expected column u_" + std::to_string(k) + ", got '" + header[2 + k] + "'");
  if (rows.empty()) throw ValidationError("schedule has no steps");

  AmplitudeArray amps(static_cast<Eigen::Index>(rows.size()), k_count);
  for (std::size_t n = 0; n < rows.size(); ++n) {
    const int line = lines[n];
    if (parse_integer(rows[n][0], line) != static_cast<long long>(n))
      csv_error(line, "step index out of sequence");
    parse_number(rows[n][1], line);
    for (int k = 0; k < k_count; ++k) amps(n, k) = parse_number(rows[n][2 + k], line);
    parse_number(rows[n].back(), line);
  }
  return PulseSchedule(std::move(amps));
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("matrix must be a non-empty list of rows");
  const auto n_rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) throw ValidationError("matrix rows must be non-empty lists");
  const auto n_cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(n_rows, n_cols);
  for (Eigen::Index i = 0; i < n_rows; ++i) {
    const json& row = j[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n_cols)
      throw ValidationError("matrix row " + std::to_string(i) + " has the wrong length");
    for (Eigen::Index c = 0; c < n_cols; ++c) {
      const json& e = row[c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw ValidationError("matrix entry (" + std::to_string(i) + "," + std::to_string(c) +
                              ") must be [re, im]");
      m(i, c) = cplx(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

json adjoint_to_json(const AdjointMatrix& g) {
  return {{"dim", g.dim},
          {"basis", "gell-mann"},
          {"coeffs", std::vector<double>(g.coeffs.data(), g.coeffs.data() + g.coeffs.size())}};
}

AdjointMatrix adjoint_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("adjoint matrix must be an object");
  if (j.value("basis", "") != "gell-mann") throw ValidationError("adjoint basis must be gell-mann");
  const int dim = j.at("dim").get<int>();
  const auto coeffs = j.at("coeffs").get<std::vector<double>>();
  if (dim < 2 || static_cast<int>(coeffs.size()) != AdjointMatrix::parameter_count(dim))
    throw ValidationError("adjoint matrix needs d^2 - 1 coefficients");
  return AdjointMatrix{dim, Eigen::Map<const RealVector>(coeffs.data(), coeffs.size())};
}

json schedule_to_json(const PulseSchedule& schedule) {
  json rows = json::array();
  for (int n = 0; n < schedule.n_steps(); ++n) {
    const auto s = schedule.step(n);
    rows.push_back(std::vector<double>(s.begin(), s.end()));
  }
  return {{"n_steps", schedule.n_steps()},
          {"n_controls", schedule.n_controls()},
          {"amplitudes", std::move(rows)}};
}

PulseSchedule schedule_from_json(const json& j) {
  const int n_steps = j.at("n_steps").get<int>();
  const int k_count = j.at("n_controls").get<int>();
  const json& rows = j.at("amplitudes");
  if (n_steps < 1 || k_count < 1 || !rows.is_array() || static_cast<int>(rows.size()) != n_steps)
    throw ValidationError("schedule amplitudes do not match n_steps");
  AmplitudeArray amps(n_steps, k_count);
  for (int n = 0; n < n_steps; ++n) {
    const auto row = rows[n].get<std::vector<double>>();
    if (static_cast<int>(row.size()) != k_count)
      throw ValidationError("schedule row " + std::to_string(n) + " has the wrong length");
    for (int k = 0; k < k_count; ++k) amps(n, k) = row[k];
  }
  return PulseSchedule(std::move(amps));
}

json report_to_json(const OptimizationReport& r, bool include_timing) {
  json j;
  j["algorithm"] = r.algorithm;
  j["dim"] = r.dim;
  j["parameter_count"] = r.parameter_count;
  j["final_g"] = r.final_g ? adjoint_to_json(*r.final_g) : json(nullptr);
  j["final_schedule"] = schedule_to_json(r.final_schedule);
  j["infidelity"] = r.infidelity;
  j["duration"] = r.duration;
  j["duration_qsl"] = r.duration_qsl;
  j["cost_trace"] = r.cost_trace;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["stop_reason"] = to_string(r.stop_reason);
  j["seed"] = r.seed;
  if (include_timing) j["wall_time"] = r.wall_time;
  return j;
}

namespace {

StopReason parse_stop_reason(const std::string& s) {
  for (auto r : {StopReason::converged, StopReason::stalled, StopReason::stationary,
                 StopReason::max_iters, StopReason::line_search_failed, StopReason::error})
    if (to_string(r) == s) return r;
  throw ValidationError("unknown stop reason '" + s + "'");
}

}  // namespace

OptimizationReport report_from_json(const json& j) {
  OptimizationReport r;
  r.algorithm = j.at("algorithm").get<std::string>();
  r.dim = j.at("dim").get<int>();
  r.parameter_count = j.at("parameter_count").get<int>();
  if (!j.at("final_g").is_null()) r.final_g = adjoint_from_json(j.at("final_g"));
  r.final_schedule = schedule_from_json(j.at("final_schedule"));
  r.infidelity = j.at("infidelity").get<double>();
  r.duration = j.at("duration").get<double>();
  r.duration_qsl = j.at("duration_qsl").get<double>();
  r.cost_trace = j.at("cost_trace").get<std::vector<double>>();
  r.iterations = j.at("iterations").get<int>();
  r.converged = j.at("converged").get<bool>();
  r.stop_reason = parse_stop_reason(j.at("stop_reason").get<std::string>());
  r.seed = j.at("seed").get<std::uint64_t>();
  r.wall_time = j.value("wall_time", 0.0);
  return r;
}

void write_records_csv(std::ostream& out, const std::vector<BenchmarkRecord>& records) {
  out << "dim,run_index,seed,infidelity,duration_omega,duration_qsl,iterations,converged\n";
  for (const auto& r : records) {
    out << r.dim << ',' << r.run_index << ',' << r.seed << ',' << format_double(r.infidelity)
        << ',' << format_double(r.duration_omega) << ',' << format_double(r.duration_qsl) << ','
        << r.iterations << ',' << (r.converged ? 1 : 0) << '\n';
  }
}

std::vector<BenchmarkRecord> read_records_csv(std::istream& in) {
  std::vector<std::string> header;
  std::vector<int> lines;
  const auto rows = read_table(in, header, lines);
  const std::vector<std::string> expected{"dim",          "run_index",    "seed",
                                          "infidelity",   "duration_omega", "duration_qsl",
                                          "iterations",   "converged"};
  if (header != expected) csv_error(1, "unexpected records header");
  std::vector<BenchmarkRecord> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& f = rows[i];
    const int line = lines[i];
    BenchmarkRecord r;
    r.dim = static_cast<int>(parse_integer(f[0], line));
    r.run_index = static_cast<int>(parse_integer(f[1], line));
    const std::string seed = strip(f[2]);
    char* end = nullptr;
    r.seed = std::strtoull(seed.c_str(), &end, 10);
    if (seed.empty() || end != seed.c_str() + seed.size()) csv_error(line, "bad seed");
    r.infidelity = parse_number(f[3], line);
    r.duration_omega = parse_number(f[4], line);
    r.duration_qsl = parse_number(f[5], line);
    r.iterations = static_cast<int>(parse_integer(f[6], line));
    const long long c = parse_integer(f[7], line);
    if (c != 0 && c != 1) csv_error(line, "converged must be 0 or 1");
    r.converged = c == 1;
    out.push_back(r);
  }
  return out;
}

json summary_to_json(const std::vector<DimensionSummary>& summary) {
  json dims = json::array();
  for (const auto& s : summary) {
    dims.push_back({{"dim", s.dim},
                    {"runs", s.runs},
                    {"converged", s.converged},
                    {"success_rate", s.success_rate},
                    {"minimal_duration", s.minimal_duration ? json(*s.minimal_duration) : json()},
                    {"median_duration", s.median_duration ? json(*s.median_duration) : json()}});
  }
  return {{"dimensions", std::move(dims)}};
}

void write_scatter(std::ostream& out, const std::vector<BenchmarkRecord>& records, int dim) {
  out << "# dim " << dim << "\n# duration_qsl infidelity\n";
  for (const auto& r : records) {
    if (r.dim != dim) continue;
    out << format_double(r.duration_qsl) << ' ' << format_double(std::max(r.infidelity, 1e-16))
        << '\n';
  }
}

std::vector<BlochPoint> bloch_trajectory(const ControlSet& controls,
                                         const PulseSchedule& schedule) {
  if (controls.dim() != 2) throw InvalidDimension("Bloch trajectory needs d = 2");
  const PropagationResult prop = propagate(controls, schedule);
  std::vector<BlochPoint> points;
  points.reserve(prop.unitaries.size());
  for (std::size_t n = 0; n < prop.unitaries.size(); ++n) {
    const Matrix& u = prop.unitaries[n].matrix();
    const cplx a = u(0, 0);
    const cplx b = u(1, 0);
    const cplx ab = std::conj(a) * b;
    points.push_back({static_cast<double>(n) * schedule.dt(), 2.0 * ab.real(), 2.0 * ab.imag(),
                      std::norm(a) - std::norm(b)});
  }
  return points;
}

void write_bloch_csv(std::ostream& out, const std::vector<BlochPoint>& points) {
  out << "t,x,y,z\n";
  for (const auto& p : points)
    out << format_double(p.t) << ',' << format_double(p.x) << ',' << format_double(p.y) << ','
        << format_double(p.z) << '\n';
}

std::vector<BlochPoint> read_bloch_csv(std::istream& in) {
  std::vector<std::string> header;
  std::vector<int> lines;
  const auto rows = read_table(in, header, lines);
  if (header != std::vector<std::string>{"t", "x", "y", "z"}) csv_error(1, "expected header t,x,y,z");
  std::vector<BlochPoint> out;
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.push_back({parse_number(rows[i][0], lines[i]), parse_number(rows[i][1], lines[i]),
                   parse_number(rows[i][2], lines[i]), parse_number(rows[i][3], lines[i])});
  return out;
}

}  // namespace magicarp
