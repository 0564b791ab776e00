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
#include <sstream>

#include "magicarp/config.hpp"
#include "magicarp/io.hpp"
#include "oracles.hpp"

using namespace magicarp;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_run_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& s, const std::string& part) {
  return s.find(part) != std::string::npos;
}

}  // namespace

TEST_CASE("schedule CSV round-trips exactly") {
  std::mt19937_64 rng(79);
  const PulseSchedule s = oracle::random_schedule(9, 3, rng, 1e3);
  std::stringstream ss;
  write_schedule_csv(ss, s);
  const std::string text = ss.str();
  CHECK(text.rfind("step,t,u_0,u_1,u_2,envelope\n", 0) == 0);
  const PulseSchedule back = read_schedule_csv(ss);
  CHECK(back.amplitudes() == s.amplitudes());
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("schedule CSV errors name the line") {
  auto fails_with = [](const std::string& text, const std::string& part) {
    std::istringstream in(text);
    try {
      read_schedule_csv(in);
    } catch (const ValidationError& e) {
      return contains(e.what(), part);
    }
    return false;
  };
  CHECK(fails_with("", "missing header"));
  CHECK(fails_with("step,t,u_0,u_1,envelope\n", "no steps"));
  CHECK(fails_with("step,t,x,envelope\n0,0,1,1\n", "line 1"));
  CHECK(fails_with("step,t,u_0,envelope\n0,0,1,1\n1,0.5,abc,1\n", "line 3"));
  CHECK(fails_with("step,t,u_0,envelope\n0,0,1,1\n1,0.5,1\n", "line 3"));
  CHECK(fails_with("step,t,u_0,envelope\n0,0,1,1\n5,0.5,1,1\n", "line 3"));
  CHECK(fails_with("step,t,u_0,envelope\n0,0,nan,1\n", "line 2"));
}

TEST_CASE("matrix and adjoint JSON") {
  std::mt19937_64 rng(83);
  const Matrix m = oracle::random_hermitian(3, rng);
  CHECK(matrix_from_json(matrix_to_json(m)) == m);
  CHECK_THROWS_AS(matrix_from_json(json::parse("[[[1,0],[0,0]],[[0,0]]]")), ValidationError);
  CHECK_THROWS_AS(matrix_from_json(json::parse("[[1,2]]")), ValidationError);

  const AdjointMatrix g{3, RealVector::LinSpaced(8, -1.0, 1.0)};
  const json j = adjoint_to_json(g);
  CHECK(j["basis"] == "gell-mann");
  CHECK(j["dim"] == 3);
  const AdjointMatrix back = adjoint_from_json(j);
  CHECK(back.coeffs == g.coeffs);
  json wrong = j;
  wrong["basis"] = "pauli";
  CHECK_THROWS_AS(adjoint_from_json(wrong), ValidationError);
  wrong = j;
  wrong["coeffs"] = {1.0, 2.0};
  CHECK_THROWS_AS(adjoint_from_json(wrong), ValidationError);
}

TEST_CASE("report JSON round-trips and hides timing by default") {
  OptimizationReport r;
  r.algorithm = "magicarp";
  r.dim = 2;
  r.parameter_count = 3;
  r.final_g = AdjointMatrix{2, (RealVector(3) << 0.1, -0.2, 0.3).finished()};
  r.final_schedule = PulseSchedule(AmplitudeArray::Constant(4, 2, 0.7));
  r.infidelity = 1.5e-9;
  r.duration = 1.9;
  r.duration_qsl = 1.2;
  r.cost_trace = {1.0, 0.1, 1.5e-9};
  r.iterations = 2;
  r.converged = true;
  r.stop_reason = StopReason::converged;
  r.seed = 18446744073709551615ULL;
  r.wall_time = 0.25;

  const json j = report_to_json(r);
  CHECK_FALSE(j.contains("wall_time"));
  CHECK(report_to_json(r, true)["wall_time"] == 0.25);
  const OptimizationReport back = report_from_json(json::parse(j.dump()));
  CHECK(report_to_json(back) == j);
  CHECK(back.seed == r.seed);
  CHECK(back.final_g->coeffs == r.final_g->coeffs);

  r.final_g.reset();
  r.algorithm = "grape";
  CHECK(report_to_json(r)["final_g"].is_null());
  CHECK_FALSE(report_from_json(report_to_json(r)).final_g.has_value());
}

TEST_CASE("records CSV, summary and scatter") {
  std::vector<BenchmarkRecord> rs(2);
  rs[0] = {2, 0, 15415986080105920549ULL, 3.2e-9, 1.97, 1.2535, 41, true};
  rs[1] = {2, 1, 7, 0.0, 2.5, 1.6, 12, false};
  std::stringstream ss;
  write_records_csv(ss, rs);
  CHECK(ss.str().rfind("dim,run_index,seed,infidelity,duration_omega,duration_qsl,iterations,converged\n", 0) == 0);
  const auto back = read_records_csv(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[0].seed == rs[0].seed);
  CHECK(back[0].infidelity == rs[0].infidelity);
  CHECK(back[1].converged == false);
  CHECK(back[1].iterations == 12);

  std::istringstream bad("dim,run_index,seed,infidelity,duration_omega,duration_qsl,iterations,converged\n2,0,1,0,0,0,1,2\n");
  CHECK_THROWS_AS(read_records_csv(bad), ValidationError);

  const auto summary = summarize(rs, {2, 3});
  const json j = summary_to_json(summary);
  CHECK(j["dimensions"][0]["minimal_duration"] == 1.2535);
  CHECK(j["dimensions"][1]["minimal_duration"].is_null());

  std::stringstream scatter;
  write_scatter(scatter, rs, 2);
  std::string line;
  int data_lines = 0;
  while (std::getline(scatter, line)) {
    if (line.empty() || line[0] == '#') continue;
    ++data_lines;
    std::istringstream fields(line);
    double x = 0.0, y = 0.0;
    fields >> x >> y;
    CHECK(y > 0.0);  // log-scale ready
  }
  CHECK(data_lines == 2);
}

TEST_CASE("Bloch trajectory") {
  const ControlSet c = nearest_neighbor_control_set(2);
  for (const auto& p : bloch_trajectory(c, PulseSchedule::zeros(5, 2))) {
    CHECK(p.x == 0.0);
    CHECK(p.y == 0.0);
    CHECK(p.z == 1.0);
  }
  // Rx(pi/2)|0> points along -y.
  AmplitudeArray a = AmplitudeArray::Zero(50, 2);
  a.col(0).setConstant(std::numbers::pi / 4);
  const auto pts = bloch_trajectory(c, PulseSchedule(a));
  REQUIRE(pts.size() == 51);
  CHECK(std::abs(pts.back().x) <= 1e-12);
  CHECK(pts.back().y == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(pts.back().z) <= 1e-12);
  CHECK(pts.back().t == doctest::Approx(1.0));

  std::mt19937_64 rng(89);
  const auto rnd = bloch_trajectory(c, oracle::random_schedule(100, 2, rng, 3.0));
  for (const auto& p : rnd) CHECK(std::abs(p.x * p.x + p.y * p.y + p.z * p.z - 1.0) <= 1e-10);

  std::stringstream ss;
  write_bloch_csv(ss, rnd);
  const auto back = read_bloch_csv(ss);
  REQUIRE(back.size() == rnd.size());
  CHECK(back[37].y == rnd[37].y);
  CHECK_THROWS_AS(bloch_trajectory(nearest_neighbor_control_set(3), PulseSchedule::zeros(3, 4)),
                  InvalidDimension);
}

TEST_CASE("default config") {
  const RunConfig c = parse_run_config("{}");
  CHECK(c.seed == 0);
  CHECK(c.target.name == GateName::hadamard);
  CHECK(c.target.dim == 2);
  CHECK(c.controls.rule == "nearest_neighbor");
  CHECK(c.magicarp.n_steps == 128);
  CHECK(c.grape.n_steps == 64);
  CHECK(c.benchmark.runs_per_dim == 300);
  CHECK(c.output.dir == "out");
  CHECK_FALSE(c.workers.has_value());
}

TEST_CASE("config round-trip is the identity") {
  const std::string text = R"({
    // comments are allowed
    "seed": 42, "workers": 3,
    "target": {"name": "custom", "dim": 2, "entries": [[[0,0],[1,0]],[[1,0],[0,0]]]},
    "controls": {"rule": "custom", "omega_max": 2.5,
                 "hamiltonians": [[[[0,0],[1,0]],[[1,0],[0,0]]], [[[1,0],[0,0]],[[0,0],[-1,0]]]]},
    "magicarp": {"mode": "time_optimal_renormalized", "n_steps": 64, "max_iters": 100,
                 "grad_step": 1e-5, "convergence_tol": 1e-8, "stall_tol": 1e-11, "stall_window": 10,
                 "init": {"kind": "explicit", "coeffs": [0.1, 0.2, 0.3]}},
    "grape": {"n_steps": 2, "penalty_weight": 1e-4, "init": {"kind": "explicit", "amplitudes": [[1, 0], [0, 1]]}},
    "benchmark": {"dims": [2, 3], "runs_per_dim": 5, "target": "qft", "control_set": "nearest_neighbor"},
    "output": {"dir": "results", "timing": true}
  })";
  const RunConfig c = parse_run_config(text);
  CHECK(c.seed == 42);
  CHECK(c.magicarp.seed == 42);
  CHECK(c.grape.seed == 42);
  CHECK(c.benchmark.base_seed == 42);
  CHECK(c.benchmark.omega_max == 2.5);
  CHECK(std::holds_alternative<RandomNormalInit>(c.benchmark.magicarp.init));
  CHECK(c.controls.build(2).size() == 2);
  const json j = run_config_to_json(c);
  const RunConfig again = parse_run_config(j.dump());
  CHECK(run_config_to_json(again) == j);

  const json d = run_config_to_json(parse_run_config("{}"));
  CHECK(run_config_to_json(parse_run_config(d.dump(2))) == d);
}

TEST_CASE("config diagnostics") {
  CHECK(contains(error_of(R"({"magicarp": {"n_stepz": 3}})"), "magicarp.n_stepz: unknown key"));
  CHECK(contains(error_of(R"({"grape": {"init": {"kind": "zeros", "sigma": 1}}})"),
                 "grape.init.sigma: unknown key"));
  CHECK(contains(error_of(R"({"speed": 1})"), "speed: unknown key"));
  CHECK(contains(error_of(R"({"seed": -1})"), "seed: expected a non-negative integer"));
  CHECK(contains(error_of(R"({"magicarp": {"n_steps": 1.5}})"), "magicarp.n_steps: expected an integer"));
  CHECK(contains(error_of(R"({"magicarp": {"mode": "fast"}})"), "magicarp.mode: unknown value"));
  CHECK(contains(error_of(R"({"magicarp": {"n_steps": 0}})"), "magicarp"));
  CHECK(contains(error_of(R"({"grape": {"n_steps": 0}})"), "grape"));
  CHECK(contains(error_of(R"({"target": {"name": "custom"}})"), "target.entries"));
  CHECK(contains(error_of(R"({"target": {"name": "custom", "entries": [[[2,0],[0,0]],[[0,0],[1,0]]]}})"),
                 "not unitary"));
  CHECK(contains(error_of(R"({"controls": {"omega_max": 0}})"), "controls.omega_max"));
  CHECK(contains(error_of(R"({"benchmark": {"dims": [1]}})"), "benchmark.dims"));
  CHECK(contains(error_of(R"({"magicarp": {"init": {"kind": "explicit", "coeffs": [1]}}})"),
                 "magicarp.init.coeffs"));
  CHECK(contains(error_of("[1, 2]"), "expected an object"));
  const std::string syntax = error_of("{\n  \"seed\": 1,\n  \"magicarp\": {\"n_steps\": }\n}");
  CHECK(contains(syntax, "line 3"));
  CHECK(contains(syntax, "column"));
}
