#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "ccga/checks.hpp"
#include "ccga/config.hpp"
#include "ccga/csv.hpp"
#include "ccga/engine.hpp"
#include "ccga/experiments.hpp"
#include "ccga/potentials.hpp"
#include "ccga/random_stream.hpp"
#include "ccga/theorylab.hpp"

namespace fs = std::filesystem;
using namespace ccga;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::int64_t> trials;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOptions& options, bool with_jobs, bool with_trials) {
  cmd->add_option("-c,--config", options.config, "JSON configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", options.seed, "master seed (overrides the config)");
  if (with_jobs) cmd->add_option("-j,--jobs", options.jobs, "worker threads")->check(CLI::PositiveNumber);
  if (with_trials) cmd->add_option("--trials", options.trials, "trials (overrides the config)");
  cmd->add_option("-o,--out", options.out, "output directory (default: $CCGA_OUTPUT_DIR or .)");
}

Json effective_document(const CommonOptions& options, bool jobs_key, bool trials_key) {
  Json doc = options.config.empty() ? Json::object() : load_json_file(options.config);
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  if (options.seed) doc["seed"] = *options.seed;
  if (jobs_key && options.jobs) doc["jobs"] = *options.jobs;
  if (trials_key && options.trials) doc["trials"] = *options.trials;
  return doc;
}

fs::path output_dir(const CommonOptions& options) {
  fs::path dir = options.out.empty() ? default_output_dir() : fs::path(options.out);
  fs::create_directories(dir);
  return dir;
}

fs::path config_dir(const CommonOptions& options) {
  return options.config.empty() ? fs::path{} : fs::path(options.config).parent_path();
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

void write_manifest(const fs::path& dir, const std::string& command, const Json& config) {
  Json manifest;
  manifest["tool"] = "ccga";
  manifest["version"] = CCGA_VERSION;
  manifest["command"] = command;
  manifest["config"] = config;
  open_output(dir / "manifest.json") << manifest.dump(2) << '\n';
}

int cmd_run(const CommonOptions& options) {
  const RunConfig config = parse_run_config(effective_document(options, false, false), config_dir(options));
  const RunResult result = run_trial(config);
  Json doc;
  doc["config"] = to_json(config);
  doc["result"] = to_json(result);
  std::cout << doc.dump(2) << '\n';
  if (!options.out.empty() || std::getenv("CCGA_OUTPUT_DIR")) {
    const fs::path dir = output_dir(options);
    open_output(dir / "run.json") << doc.dump(2) << '\n';
    if (config.trace_stride > 0) {
      auto out = open_output(dir / "trace.csv");
      CsvWriter csv(out);
      csv.row("t", "d", "optimal_count", "theta_opt");
      const double grid = static_cast<double>(config.resolution.grid_size());
      for (const auto& sample : result.trace) {
        for (Index d = 0; d < sample.optimal_counts.size(); ++d) {
          csv.row(sample.t, d, sample.optimal_counts(d), static_cast<double>(sample.optimal_counts(d)) / grid);
        }
      }
    }
    write_manifest(dir, "run", to_json(config));
  }
  return kExitOk;
}

int cmd_potential_trace(const CommonOptions& options) {
  Json doc = effective_document(options, false, false);
  if (!doc.contains("trace_stride")) doc["trace_stride"] = 1;
  if (!doc.contains("continue_after_hit")) doc["continue_after_hit"] = true;
  const RunConfig config = parse_run_config(doc, config_dir(options));
  const RunResult result = run_trial(config);
  const fs::path dir = output_dir(options);
  auto out = open_output(dir / "potential_trace.csv");
  CsvWriter csv(out);
  const Resolution& res = config.resolution;
  if (config.objective.kind() == ObjectiveKind::KVal) {
    csv.row("t", "kval_potential", "kval_legacy");
    for (const auto& s : result.trace) {
      csv.row(s.t, kval_potential(s.optimal_counts, res), kval_legacy(s.optimal_counts, res));
    }
  } else {
    csv.row("t", "d", "onemax_potential", "onemax_legacy");
    for (const auto& s : result.trace) {
      for (Index d = 0; d < s.optimal_counts.size(); ++d) {
        csv.row(s.t, d, onemax_potential(s.optimal_counts(d), res),
                onemax_legacy(s.optimal_counts(d), res));
      }
    }
  }
  write_manifest(dir, "potential-trace", to_json(config));
  std::cout << "wrote " << (dir / "potential_trace.csv").string() << " (" << result.trace.size()
            << " samples, hit=" << (result.hit ? "yes" : "no") << ")\n";
  return kExitOk;
}

int cmd_sweep(const CommonOptions& options) {
  const SweepSpec spec = parse_sweep_spec(effective_document(options, true, true));
  const SweepResult result = run_sweep(spec);
  const fs::path dir = output_dir(options);
  {
    auto trials = open_output(dir / "trials.csv");
    write_trials_csv(trials, result.trials, spec.thresholds);
    auto cells = open_output(dir / "cells.csv");
    write_cells_csv(cells, result.cells);
    auto overlay = open_output(dir / "overlay.csv");
    write_overlay_csv(overlay, result.cells);
  }
  write_manifest(dir, "sweep", to_json(spec));

  std::cout << std::left << std::setprecision(6) << std::setw(6) << "D" << std::setw(6) << "K" << std::setw(8) << "m"
            << std::setw(10) << "success" << std::setw(12) << "median" << std::setw(12) << "bound"
            << "ratio\n";
  bool ok = true;
  for (const auto& c : result.cells) {
    std::cout << std::setw(6) << c.dimensions << std::setw(6) << c.categories << std::setw(8) << c.m
              << std::setw(10) << c.success_rate << std::setw(12) << c.median << std::setw(12)
              << c.bound << c.median_bound_ratio << '\n';
    if (!c.error.empty()) {
      std::cerr << "cell D=" << c.dimensions << " K=" << c.categories << " failed: " << c.error << '\n';
      ok = false;
    }
  }
  std::cout << "wrote " << dir.string() << "/{trials,cells,overlay}.csv\n";
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_drift_check(const CommonOptions& options) {
  const DriftCheckSpec spec = parse_drift_check_spec(effective_document(options, false, false));
  const auto rows = run_drift_checks(spec);
  if (!options.out.empty() || std::getenv("CCGA_OUTPUT_DIR")) {
    auto out = open_output(output_dir(options) / "drift_check.csv");
    write_check_rows_csv(out, rows);
  }
  bool ok = true;
  std::cout << std::left << std::setw(20) << "check" << std::setw(8) << "rows" << std::setw(10)
            << "failures" << "status\n";
  for (const auto& s : summarize_checks(rows)) {
    std::cout << std::setw(20) << s.check << std::setw(8) << s.rows << std::setw(10) << s.failures
              << (s.failures ? "FAIL (first: " + s.first_failure + ")" : std::string("pass")) << '\n';
    ok = ok && s.failures == 0;
  }
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_theorem_check(const CommonOptions& options) {
  const TheoremCheckSpec spec = parse_theorem_check_spec(effective_document(options, true, true));
  std::vector<BoundReport> reports;
  for (const auto& scenario : spec.scenarios) {
    const RandomStream stream(mix_seed({spec.seed, scenario.seed}));
    reports.push_back(simulate_tail(scenario, stream, spec.jobs));
  }
  if (!options.out.empty() || std::getenv("CCGA_OUTPUT_DIR")) {
    auto out = open_output(output_dir(options) / "theorem_check.csv");
    write_bound_reports_csv(out, spec.scenarios, reports);
  }
  bool ok = true;
  std::cout << std::left << std::setprecision(6) << std::setw(22) << "scenario" << std::setw(5)
            << "thm" << std::setw(14) << "empirical" << std::setw(14) << "stderr" << std::setw(14)
            << "bound" << std::setw(14) << "naive_bound" << "status\n";
  for (const auto& r : reports) {
    std::cout << std::setw(22) << r.scenario << std::setw(5) << r.theorem << std::setw(14)
              << r.empirical << std::setw(14) << r.stderr_ << std::setw(14) << r.bound
              << std::setw(14) << r.naive_bound << (r.holds ? "pass" : "FAIL") << '\n';
    ok = ok && r.holds;
  }
  return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and analysis toolkit for the categorical compact GA"};
  app.set_version_flag("--version", std::string(CCGA_VERSION));
  app.require_subcommand(1);

  CommonOptions run_opts, trace_opts, sweep_opts, drift_opts, theorem_opts;
  auto* run = app.add_subcommand("run", "one ccGA trial; prints the result as JSON");
  add_common(run, run_opts, false, false);
  auto* trace = app.add_subcommand("potential-trace", "one trial with per-iteration potentials");
  add_common(trace, trace_opts, false, false);
  auto* sweep = app.add_subcommand("sweep", "hitting-time sweep over D and K");
  add_common(sweep, sweep_opts, true, true);
  auto* drift = app.add_subcommand("drift-check", "drift oracles, drift bounds, delta statistics");
  add_common(drift, drift_opts, true, false);
  auto* theorem = app.add_subcommand("theorem-check", "tail bounds on synthetic processes");
  add_common(theorem, theorem_opts, true, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) return cmd_run(run_opts);
    if (*trace) return cmd_potential_trace(trace_opts);
    if (*sweep) return cmd_sweep(sweep_opts);
    if (*drift) return cmd_drift_check(drift_opts);
    if (*theorem) return cmd_theorem_check(theorem_opts);
  } catch (const InvalidInput& error) {
    std::cerr << "error: " << error.what() << '\n';
    return kExitUsage;
  } catch (const PreconditionError& error) {
    std::cerr << "error: " << error.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& error) {
    std::cerr << "internal error: " << error.what() << '\n';
    return kExitCheckFailed;
  }
  return kExitUsage;
}
