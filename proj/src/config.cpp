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

#include "magicarp/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace magicarp {

UnitaryMatrix TargetSpec::build() const {
  if (dim < 2) throw ConfigError("target.dim: must be >= 2");
  if (name == GateName::custom && !entries) throw ConfigError("target.entries: required for custom");
  if (name != GateName::custom && entries)
    throw ConfigError("target.entries: only allowed for custom targets");
  if (entries && (entries->rows() != dim || entries->cols() != dim))
    throw ConfigError("target.entries: expected a " + std::to_string(dim) + "x" +
                      std::to_string(dim) + " matrix");
  return target_gate(name, dim, entries);
}

ControlSet ControlSpec::build(int dim) const {
  if (rule == "custom") {
    if (hamiltonians.empty()) throw ConfigError("controls.hamiltonians: required for custom");
    std::vector<HermitianMatrix> hams;
    for (std::size_t k = 0; k < hamiltonians.size(); ++k) {
      const Matrix& m = hamiltonians[k];
      if (m.rows() != dim || m.cols() != dim)
        throw ConfigError("controls.hamiltonians[" + std::to_string(k) + "]: expected a " +
                          std::to_string(dim) + "x" + std::to_string(dim) + " matrix");
      if ((m - m.adjoint()).norm() > 1e-12)
        throw ConfigError("controls.hamiltonians[" + std::to_string(k) + "]: not Hermitian");
      hams.emplace_back(m);
    }
    return ControlSet(std::move(hams), omega_max);
  }
  if (!hamiltonians.empty())
    throw ConfigError("controls.hamiltonians: only allowed with rule custom");
  return make_control_set(rule, dim, omega_max);
}

void RunConfig::apply_seed(std::uint64_t s) {
  seed = s;
  magicarp.seed = s;
  grape.seed = s;
  benchmark.base_seed = s;
  benchmark.magicarp.seed = s;
}

void RunConfig::validate() const {
  if (workers && *workers < 1) throw ConfigError("workers: must be >= 1");
  if (!(controls.omega_max > 0.0) || !std::isfinite(controls.omega_max))
    throw ConfigError("controls.omega_max: must be positive");
  if (controls.rule != "custom" && controls.rule != "nearest_neighbor")
    throw ConfigError("controls.rule: unknown rule '" + controls.rule + "'");
  try {
    magicarp.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("magicarp: ") + e.what());
  }
  if (const auto* e = std::get_if<ExplicitInit>(&magicarp.init)) {
    if (e->coeffs.size() != AdjointMatrix::parameter_count(target.dim))
      throw ConfigError("magicarp.init.coeffs: expected d^2 - 1 = " +
                        std::to_string(AdjointMatrix::parameter_count(target.dim)) + " values");
  }
  try {
    grape.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("grape: ") + e.what());
  }
  if (benchmark.dims.empty()) throw ConfigError("benchmark.dims: needs at least one dimension");
  for (int d : benchmark.dims)
    if (d < 2) throw ConfigError("benchmark.dims: dimensions must be >= 2");
  if (benchmark.runs_per_dim < 1) throw ConfigError("benchmark.runs_per_dim: must be >= 1");
  if (benchmark.target == GateName::custom)
    throw ConfigError("benchmark.target: cannot be custom");
  if (benchmark.control_set != "nearest_neighbor")
    throw ConfigError("benchmark.control_set: unknown rule '" + benchmark.control_set + "'");
  try {
    const UnitaryMatrix u = target.build();
    const ControlSet cs = controls.build(target.dim);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("target/controls: ") + e.what());
  }
}

namespace {

// Reads one JSON object, tracking the dotted path for diagnostics and the
// set of keys consumed so that leftovers can be reported as unknown.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("", "expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& at(const std::string& key) { return j_.at(key); }

  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    const std::string where = key.empty() ? (path_.empty() ? "config" : path_) : field(key);
    throw ConfigError(where + ": " + what);
  }

  void read(const std::string& key, int& out) {
    if (!has(key)) return;
    const json& v = at(key);
    if (!v.is_number_integer()) fail(key, "expected an integer");
    const auto x = v.get<std::int64_t>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
      fail(key, "integer out of range");
    out = static_cast<int>(x);
  }

  void read(const std::string& key, std::uint64_t& out) {
    if (!has(key)) return;
    const json& v = at(key);
    if (!v.is_number_unsigned()) fail(key, "expected a non-negative integer");
    out = v.get<std::uint64_t>();
  }

  void read(const std::string& key, double& out) {
    if (!has(key)) return;
    const json& v = at(key);
    if (!v.is_number()) fail(key, "expected a number");
    out = v.get<double>();
  }

  void read(const std::string& key, bool& out) {
    if (!has(key)) return;
    const json& v = at(key);
    if (!v.is_boolean()) fail(key, "expected true or false");
    out = v.get<bool>();
  }

  void read(const std::string& key, std::string& out) {
    if (!has(key)) return;
    const json& v = at(key);
    if (!v.is_string()) fail(key, "expected a string");
    out = v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) {
    const json& v = at(key);
    if (!v.is_array()) fail(key, "expected a list of numbers");
    std::vector<double> out;
    for (const json& e : v) {
      if (!e.is_number()) fail(key, "expected a list of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  Matrix matrix(const std::string& key, const json& v) const {
    try {
      return matrix_from_json(v);
    } catch (const ValidationError& e) {
      fail(key, e.what());
    }
  }

  // Called after all reads of this section.
  void finish() const {
    for (const auto& item : j_.items())
      if (!seen_.count(item.key())) fail(item.key(), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename F>
auto parse_enum(Section& s, const std::string& key, const std::string& value, F f) {
  try {
    return f(value);
  } catch (const Error&) {
    s.fail(key, "unknown value '" + value + "'");
  }
}

void read_target(Section& s, TargetSpec& t) {
  std::string name = to_string(t.name);
  s.read("name", name);
  t.name = parse_enum(s, "name", name, parse_gate_name);
  s.read("dim", t.dim);
  if (s.has("entries")) t.entries = s.matrix("entries", s.at("entries"));
  s.finish();
}

void read_controls(Section& s, ControlSpec& c) {
  s.read("rule", c.rule);
  s.read("omega_max", c.omega_max);
  if (s.has("hamiltonians")) {
    const json& list = s.at("hamiltonians");
    if (!list.is_array()) s.fail("hamiltonians", "expected a list of matrices");
    c.hamiltonians.clear();
    for (std::size_t k = 0; k < list.size(); ++k)
      c.hamiltonians.push_back(s.matrix("hamiltonians[" + std::to_string(k) + "]", list[k]));
  }
  s.finish();
}

void read_magicarp(Section& s, MagicarpConfig& m) {
  std::string mode = to_string(m.mode);
  s.read("mode", mode);
  m.mode = parse_enum(s, "mode", mode, parse_pulse_mode);
  s.read("n_steps", m.n_steps);
  s.read("max_iters", m.max_iters);
  s.read("grad_step", m.grad_step);
  s.read("convergence_tol", m.convergence_tol);
  s.read("stall_tol", m.stall_tol);
  s.read("stall_window", m.stall_window);
  if (s.has("init")) {
    Section init(s.at("init"), s.field("init"));
    std::string kind = "random_normal";
    init.read("kind", kind);
    if (kind == "random_normal") {
      RandomNormalInit r;
      init.read("sigma", r.sigma);
      m.init = r;
    } else if (kind == "explicit") {
      if (!init.has("coeffs")) init.fail("coeffs", "required for explicit init");
      const auto c = init.numbers("coeffs");
      m.init = ExplicitInit{Eigen::Map<const RealVector>(c.data(), c.size())};
    } else {
      init.fail("kind", "unknown value '" + kind + "'");
    }
    init.finish();
  }
  s.finish();
}

void read_grape(Section& s, GrapeConfig& g) {
  s.read("n_steps", g.n_steps);
  s.read("max_iters", g.max_iters);
  s.read("convergence_tol", g.convergence_tol);
  s.read("penalty_weight", g.penalty_weight);
  s.read("stall_tol", g.stall_tol);
  s.read("stall_window", g.stall_window);
  if (s.has("init")) {
    Section init(s.at("init"), s.field("init"));
    std::string kind = "random_normal";
    init.read("kind", kind);
    if (kind == "zeros") {
      g.init = GrapeZerosInit{};
    } else if (kind == "random_normal") {
      GrapeRandomInit r;
      init.read("sigma", r.sigma);
      g.init = r;
    } else if (kind == "explicit") {
      if (!init.has("amplitudes")) init.fail("amplitudes", "required for explicit init");
      const json& rows = init.at("amplitudes");
      if (!rows.is_array() || rows.empty() || !rows[0].is_array() || rows[0].empty())
        init.fail("amplitudes", "expected a non-empty list of rows");
      AmplitudeArray amps(static_cast<Eigen::Index>(rows.size()),
                          static_cast<Eigen::Index>(rows[0].size()));
      for (std::size_t n = 0; n < rows.size(); ++n) {
        if (!rows[n].is_array() || rows[n].size() != rows[0].size())
          init.fail("amplitudes", "row " + std::to_string(n) + " has the wrong length");
        for (std::size_t k = 0; k < rows[n].size(); ++k) {
          if (!rows[n][k].is_number()) init.fail("amplitudes", "expected numbers");
          amps(n, k) = rows[n][k].get<double>();
        }
      }
      try {
        g.init = GrapeExplicitInit{PulseSchedule(std::move(amps))};
      } catch (const Error& e) {
        init.fail("amplitudes", e.what());
      }
    } else {
      init.fail("kind", "unknown value '" + kind + "'");
    }
    init.finish();
  }
  s.finish();
}

void read_benchmark(Section& s, BenchmarkSpec& b) {
  if (s.has("dims")) {
    const json& v = s.at("dims");
    if (!v.is_array()) s.fail("dims", "expected a list of integers");
    b.dims.clear();
    for (const json& e : v) {
      if (!e.is_number_integer()) s.fail("dims", "expected a list of integers");
      b.dims.push_back(e.get<int>());
    }
  }
  s.read("runs_per_dim", b.runs_per_dim);
  std::string target = to_string(b.target);
  s.read("target", target);
  b.target = parse_enum(s, "target", target, parse_gate_name);
  s.read("control_set", b.control_set);
  s.finish();
}

std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
  int line = 1;
  int col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    // e.byte points one past the offending character.
    const auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string what = e.what();
    if (const auto p = what.find("syntax error"); p != std::string::npos) what = what.substr(p);
    throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(col) +
                      ": " + what);
  }

  RunConfig config;
  Section top(root, "");
  top.read("seed", config.seed);
  if (top.has("workers")) {
    int w = 0;
    top.read("workers", w);
    config.workers = w;
  }
  if (top.has("target")) {
    Section s(top.at("target"), "target");
    read_target(s, config.target);
  }
  if (top.has("controls")) {
    Section s(top.at("controls"), "controls");
    read_controls(s, config.controls);
  }
  if (top.has("magicarp")) {
    Section s(top.at("magicarp"), "magicarp");
    read_magicarp(s, config.magicarp);
  }
  if (top.has("grape")) {
    Section s(top.at("grape"), "grape");
    read_grape(s, config.grape);
  }
  if (top.has("benchmark")) {
    Section s(top.at("benchmark"), "benchmark");
    read_benchmark(s, config.benchmark);
  }
  if (top.has("output")) {
    Section s(top.at("output"), "output");
    s.read("dir", config.output.dir);
    s.read("timing", config.output.timing);
    s.finish();
  }
  top.finish();

  // The campaign reuses the magicarp section and the control bound.
  config.benchmark.magicarp = config.magicarp;
  config.benchmark.magicarp.init = RandomNormalInit{};
  if (const auto* r = std::get_if<RandomNormalInit>(&config.magicarp.init))
    config.benchmark.magicarp.init = *r;
  config.benchmark.omega_max = config.controls.omega_max;
  config.apply_seed(config.seed);
  config.validate();
  return config;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_run_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

json run_config_to_json(const RunConfig& c) {
  json j;
  j["seed"] = c.seed;
  if (c.workers) j["workers"] = *c.workers;

  json target{{"name", to_string(c.target.name)}, {"dim", c.target.dim}};
  if (c.target.entries) target["entries"] = matrix_to_json(*c.target.entries);
  j["target"] = std::move(target);

  json controls{{"rule", c.controls.rule}, {"omega_max", c.controls.omega_max}};
  if (!c.controls.hamiltonians.empty()) {
    json hams = json::array();
    for (const auto& h : c.controls.hamiltonians) hams.push_back(matrix_to_json(h));
    controls["hamiltonians"] = std::move(hams);
  }
  j["controls"] = std::move(controls);

  const MagicarpConfig& m = c.magicarp;
  json minit;
  if (const auto* r = std::get_if<RandomNormalInit>(&m.init)) {
    minit = {{"kind", "random_normal"}, {"sigma", r->sigma}};
  } else {
    const RealVector& v = std::get<ExplicitInit>(m.init).coeffs;
    minit = {{"kind", "explicit"}, {"coeffs", std::vector<double>(v.data(), v.data() + v.size())}};
  }
  j["magicarp"] = {{"mode", to_string(m.mode)},         {"n_steps", m.n_steps},
                   {"max_iters", m.max_iters},          {"grad_step", m.grad_step},
                   {"convergence_tol", m.convergence_tol}, {"stall_tol", m.stall_tol},
                   {"stall_window", m.stall_window},    {"init", std::move(minit)}};

  const GrapeConfig& g = c.grape;
  json ginit;
  if (std::holds_alternative<GrapeZerosInit>(g.init)) {
    ginit = {{"kind", "zeros"}};
  } else if (const auto* r = std::get_if<GrapeRandomInit>(&g.init)) {
    ginit = {{"kind", "random_normal"}, {"sigma", r->sigma}};
  } else {
    ginit = {{"kind", "explicit"},
             {"amplitudes", schedule_to_json(std::get<GrapeExplicitInit>(g.init).schedule)
                                .at("amplitudes")}};
  }
  j["grape"] = {{"n_steps", g.n_steps},
                {"max_iters", g.max_iters},
                {"convergence_tol", g.convergence_tol},
                {"penalty_weight", g.penalty_weight},
                {"stall_tol", g.stall_tol},
                {"stall_window", g.stall_window},
                {"init", std::move(ginit)}};

  const BenchmarkSpec& b = c.benchmark;
  j["benchmark"] = {{"dims", b.dims},
                    {"runs_per_dim", b.runs_per_dim},
                    {"target", to_string(b.target)},
                    {"control_set", b.control_set}};
  j["output"] = {{"dir", c.output.dir}, {"timing", c.output.timing}};
  return j;
}

}  // namespace magicarp
