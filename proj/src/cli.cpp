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

#include "magicarp/cli.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <thread>

#include <CLI11.hpp>

#include "magicarp/config.hpp"
#include "magicarp/io.hpp"

namespace magicarp {
namespace {

namespace fs = std::filesystem;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> workers;
  bool timing = false;

  // benchmark
  std::optional<int> runs;
  std::vector<int> dims;

  // certify / bloch
  std::string schedule_path;
  std::string cost = "time";
  std::optional<int> dim;
};

// Invalid-input failures raised by the CLI itself.
class UsageError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("MAGICARP_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  const std::string s(raw);
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (s[0] == '-' || end != s.c_str() + s.size() || errno == ERANGE)
    throw UsageError("MAGICARP_SEED: expected an unsigned 64-bit integer, got '" + s + "'");
  return v;
}

// File < MAGICARP_SEED < --seed.
RunConfig resolve_config(const Options& o) {
  RunConfig config = o.config_path.empty() ? parse_run_config("{}") : load_run_config(o.config_path);
  std::uint64_t seed = config.seed;
  if (const auto e = env_seed()) seed = *e;
  if (o.seed) seed = *o.seed;
  config.apply_seed(seed);
  if (o.out_dir) config.output.dir = *o.out_dir;
  if (o.timing) config.output.timing = true;
  if (o.workers) config.workers = o.workers;
  return config;
}

fs::path prepare_out_dir(const RunConfig& config) {
  const fs::path dir(config.output.dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

template <typename F>
void write_file(const fs::path& path, F&& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  body(out);
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

void print_summary(std::ostream& out, const OptimizationReport& r) {
  char line[160];
  std::snprintf(line, sizeof line, "infidelity=%.6e duration=%.6f duration_qsl=%.6f",
                r.infidelity, r.duration, r.duration_qsl);
  out << line << '\n';
}

int finish_report(const RunConfig& config, const OptimizationReport& report, std::ostream& out) {
  const fs::path dir = prepare_out_dir(config);
  write_file(dir / "report.json", [&](std::ostream& f) {
    f << report_to_json(report, config.output.timing).dump(2) << '\n';
  });
  write_file(dir / "schedule.csv",
             [&](std::ostream& f) { write_schedule_csv(f, report.final_schedule); });
  print_summary(out, report);
  return report.converged ? kExitOk : kExitFailure;
}

int cmd_optimize(const Options& o, std::ostream& out) {
  const RunConfig config = resolve_config(o);
  const ShootingContext ctx(config.controls.build(config.target.dim), config.target.build(),
                            config.magicarp);
  return finish_report(config, optimize(ctx, config.magicarp), out);
}

int cmd_grape(const Options& o, std::ostream& out) {
  const RunConfig config = resolve_config(o);
  const OptimizationReport report = grape_optimize(
      config.target.build(), config.controls.build(config.target.dim), config.grape);
  return finish_report(config, report, out);
}

int cmd_benchmark(const Options& o, std::ostream& out) {
  RunConfig config = resolve_config(o);
  BenchmarkSpec spec = config.benchmark;
  if (o.runs) spec.runs_per_dim = *o.runs;
  if (!o.dims.empty()) spec.dims = o.dims;
  spec.validate();
  std::sort(spec.dims.begin(), spec.dims.end());
  spec.dims.erase(std::unique(spec.dims.begin(), spec.dims.end()), spec.dims.end());

  const int workers = config.workers.value_or(
      std::max(1, static_cast<int>(std::thread::hardware_concurrency())));
  const auto records = run_campaign(spec, workers);
  const auto summary = summarize(records, spec.dims, spec.magicarp.convergence_tol);

  const fs::path dir = prepare_out_dir(config);
  write_file(dir / "records.csv", [&](std::ostream& f) { write_records_csv(f, records); });
  write_file(dir / "summary.json",
             [&](std::ostream& f) { f << summary_to_json(summary).dump(2) << '\n'; });
  for (int d : spec.dims)
    write_file(dir / ("scatter_d" + std::to_string(d) + ".dat"),
               [&](std::ostream& f) { write_scatter(f, records, d); });

  for (const auto& s : summary) {
    char line[200];
    std::snprintf(line, sizeof line, "dim=%d runs=%d converged=%d minimal_duration_qsl=%s", s.dim,
                  s.runs, s.converged,
                  s.minimal_duration ? format_double(*s.minimal_duration).c_str() : "none");
    out << line << '\n';
  }
  return kExitOk;
}

PulseSchedule load_schedule(const std::string& path) {
  if (path.empty()) throw UsageError("--schedule is required");
  std::ifstream in(path);
  if (!in) throw UsageError(path + ": cannot open schedule file");
  try {
    return read_schedule_csv(in);
  } catch (const ValidationError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

// Dimension for certify/bloch: --dim, then the config file, then the
// nearest-neighbour rule K = 2(d - 1).
int schedule_dim(const Options& o, const RunConfig& config, int n_controls) {
  if (o.dim) return *o.dim;
  if (!o.config_path.empty()) return config.target.dim;
  if (config.controls.rule == "nearest_neighbor") {
    if (n_controls % 2 != 0)
      throw UsageError("cannot infer the dimension from an odd control count; pass --dim");
    return n_controls / 2 + 1;
  }
  return config.target.dim;
}

int cmd_certify(const Options& o, std::ostream& out) {
  const RunConfig config = resolve_config(o);
  const PulseSchedule schedule = load_schedule(o.schedule_path);
  const int d = schedule_dim(o, config, schedule.n_controls());
  const ControlSet controls = config.controls.build(d);
  if (controls.size() != schedule.n_controls())
    throw UsageError("schedule has " + std::to_string(schedule.n_controls()) +
                     " controls, the control set has " + std::to_string(controls.size()));
  const Certificate cert =
      optimality_certificate(schedule, controls, parse_certificate_cost(o.cost));
  out << "g_fit=[";
  for (Eigen::Index i = 0; i < cert.g_fit.coeffs.size(); ++i)
    out << (i ? ", " : "") << format_double(cert.g_fit.coeffs[i]);
  out << "]\n";
  char line[160];
  std::snprintf(line, sizeof line, "residual=%.6e excluded_steps=%d equations=%d", cert.residual,
                cert.excluded_steps, cert.equations);
  out << line << '\n';
  return cert.residual <= kCertifyThreshold ? kExitOk : kExitNotOptimal;
}

int cmd_bloch(const Options& o, std::ostream& out) {
  const RunConfig config = resolve_config(o);
  PulseSchedule schedule;
  int d = 0;
  if (!o.schedule_path.empty()) {
    schedule = load_schedule(o.schedule_path);
    d = schedule_dim(o, config, schedule.n_controls());
  } else {
    d = o.dim.value_or(config.target.dim);
  }
  if (d != 2) throw UsageError("bloch export needs d = 2, got d = " + std::to_string(d));
  const ControlSet controls = config.controls.build(d);
  if (o.schedule_path.empty()) {
    // No schedule given: optimize from the config and export that pulse.
    const ShootingContext ctx(controls, config.target.build(), config.magicarp);
    schedule = optimize(ctx, config.magicarp).final_schedule;
  }
  if (controls.size() != schedule.n_controls())
    throw UsageError("schedule / control set size mismatch");
  const auto points = bloch_trajectory(controls, schedule);
  const fs::path dir = prepare_out_dir(config);
  write_file(dir / "bloch.csv", [&](std::ostream& f) { write_bloch_csv(f, points); });
  const BlochPoint& end = points.back();
  char line[160];
  std::snprintf(line, sizeof line, "points=%zu end=(%.6f, %.6f, %.6f)", points.size(), end.x,
                end.y, end.z);
  out << line << '\n';
  return kExitOk;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "Seed; overrides MAGICARP_SEED and the config file");
  cmd->add_option("--out", o.out_dir, "Output directory");
  cmd->add_option("--workers", o.workers, "Benchmark worker threads (default: core count)")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--timing", o.timing, "Record wall-clock time in report.json");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"MAGICARP quantum optimal control: shooting optimizer, GRAPE baseline, "
               "benchmark campaigns and optimality certificates",
               "magicarp"};
  app.require_subcommand(1);
  Options o;

  auto* optimize_cmd = app.add_subcommand("optimize", "Run the shooting optimizer");
  auto* grape_cmd = app.add_subcommand("grape", "Run the GRAPE baseline");
  auto* bench_cmd = app.add_subcommand("benchmark", "Run a seeded restart campaign");
  auto* certify_cmd = app.add_subcommand("certify", "Test a schedule for PMP structure");
  auto* bloch_cmd = app.add_subcommand("bloch", "Export the d = 2 Bloch trajectory");
  for (auto* cmd : {optimize_cmd, grape_cmd, bench_cmd, certify_cmd, bloch_cmd}) add_common(cmd, o);

  bench_cmd->add_option("--runs", o.runs, "Runs per dimension")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--dims", o.dims, "Dimensions, e.g. --dims 2,3,4")->delimiter(',');
  certify_cmd->add_option("--schedule", o.schedule_path, "Schedule CSV")->required();
  certify_cmd->add_option("--cost", o.cost, "time or energy")
      ->check(CLI::IsMember({"time", "time_optimal", "energy", "energy_optimal"}));
  certify_cmd->add_option("--dim", o.dim, "Qudit dimension")->check(CLI::Range(2, 64));
  bloch_cmd->add_option("--schedule", o.schedule_path, "Schedule CSV (default: optimize first)");
  bloch_cmd->add_option("--dim", o.dim, "Qudit dimension")->check(CLI::Range(2, 64));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    const std::string sub_help = app.get_subcommands().empty()
                                     ? app.help()
                                     : app.get_subcommands().front()->help();
    err << "error: " << e.what() << "\n\n" << sub_help;
    return kExitInvalidInput;
  }

  try {
    if (optimize_cmd->parsed()) return cmd_optimize(o, out);
    if (grape_cmd->parsed()) return cmd_grape(o, out);
    if (bench_cmd->parsed()) return cmd_benchmark(o, out);
    if (certify_cmd->parsed()) return cmd_certify(o, out);
    return cmd_bloch(o, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const InvalidDimension& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const DimensionMismatch& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const DegenerateInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace magicarp
