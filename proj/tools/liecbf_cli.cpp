// Copyright 2026 The liecbf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: run, sweep, verify, list.

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "liecbf/config.hpp"
#include "liecbf/log_io.hpp"
#include "liecbf/safety_filter.hpp"
#include "liecbf/scenario.hpp"
#include "liecbf/verification.hpp"

namespace {

namespace fs = std::filesystem;
using namespace liecbf;

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitConfig = 2;
constexpr int kExitFailure = 3;

struct ScenarioArgs {
  std::string preset;
  std::string config_path;
  std::optional<double> alpha_e;
  std::optional<double> alpha;
  std::optional<double> emax;
  std::optional<double> dt;
  std::optional<double> duration;
  bool no_filter = false;
  std::string on_infeasible;
  std::string out;
  std::string name;
};

void add_scenario_options(CLI::App* cmd, ScenarioArgs& a) {
  auto* preset = cmd->add_option("--preset", a.preset, "Built-in scenario")
                     ->check(CLI::IsMember({"slit", "landing"}));
  auto* config = cmd->add_option("--config", a.config_path, "Scenario config file")
                     ->check(CLI::ExistingFile);
  preset->excludes(config);
  cmd->add_option("--alpha-e", a.alpha_e, "Energy-augmentation gain alpha_e");
  cmd->add_option("--alpha", a.alpha, "Class-K coefficient");
  cmd->add_option("--emax", a.emax, "Energy bound for every energy barrier [J]");
  cmd->add_option("--dt", a.dt, "Time step [s]");
  cmd->add_option("--duration", a.duration, "Horizon [s]");
  cmd->add_flag("--no-filter", a.no_filter, "Apply the nominal controller unfiltered");
  cmd->add_option("--on-infeasible", a.on_infeasible, "abort or continue")
      ->check(CLI::IsMember({"abort", "continue"}));
  cmd->add_option("--out", a.out, "Output directory");
  cmd->add_option("--name", a.name, "Output file stem");
}

ScenarioConfig resolve(const ScenarioArgs& a) {
  if (a.preset.empty() && a.config_path.empty()) {
    throw ConfigError("preset", 0, "one of --preset or --config is required");
  }
  ScenarioConfig cfg = a.config_path.empty() ? preset(a.preset) : load_config(a.config_path);
  if (a.alpha_e) apply_override(cfg, "alpha_e", *a.alpha_e);
  if (a.alpha) apply_override(cfg, "alpha", *a.alpha);
  if (a.emax) apply_override(cfg, "emax", *a.emax);
  if (a.dt) apply_override(cfg, "dt", *a.dt);
  if (a.duration) apply_override(cfg, "duration", *a.duration);
  if (a.no_filter) cfg.filter_enabled = false;
  if (a.on_infeasible == "abort") cfg.on_infeasible = InfeasiblePolicy::kAbort;
  if (a.on_infeasible == "continue") cfg.on_infeasible = InfeasiblePolicy::kContinue;
  if (!a.out.empty()) cfg.output_dir = a.out;
  if (!a.name.empty()) cfg.output_name = a.name;
  validate(cfg);
  return cfg;
}

struct RunOutput {
  RunSummary summary;
  std::string csv_path;
  std::string summary_path;
};

RunOutput run_to_files(const ScenarioConfig& cfg) {
  fs::create_directories(cfg.output_dir);
  RunOutput out;
  out.csv_path = (fs::path(cfg.output_dir) / (cfg.output_name + ".csv")).string();
  out.summary_path = (fs::path(cfg.output_dir) / (cfg.output_name + ".summary.txt")).string();
  CsvSink sink(out.csv_path);
  out.summary = run(cfg, &sink);
  write_summary(out.summary, out.summary_path);
  return out;
}

int cmd_run(const ScenarioArgs& args) {
  const ScenarioConfig cfg = resolve(args);
  std::cerr << "config digest " << config_digest(cfg) << "\n";
  const RunOutput out = run_to_files(cfg);
  std::cout << summary_text(out.summary, true);
  std::cerr << "wrote " << out.csv_path << " and " << out.summary_path << "\n";
  return kExitOk;
}

int cmd_sweep(const ScenarioArgs& args, const std::string& param,
              const std::vector<double>& values, unsigned jobs) {
  const ScenarioConfig base = resolve(args);
  std::vector<ScenarioConfig> configs;
  for (double v : values) {
    ScenarioConfig cfg = base;
    apply_override(cfg, param, v);
    cfg.output_name = base.output_name + "_" + param + "_" + format_double(v);
    configs.push_back(std::move(cfg));
  }

  std::vector<std::optional<RunOutput>> outputs(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        outputs[i] = run_to_files(configs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < std::min<std::size_t>(jobs, configs.size()); ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int code = kExitOk;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    std::cout << "[" << param << " = " << format_double(values[i]) << "]\n";
    if (errors[i]) {
      try {
        std::rethrow_exception(errors[i]);
      } catch (const InfeasibleError& e) {
        std::cerr << param << "=" << format_double(values[i]) << ": " << e.what() << "\n";
        code = std::max(code, kExitInfeasible);
      } catch (const std::exception& e) {
        std::cerr << param << "=" << format_double(values[i]) << ": " << e.what() << "\n";
        code = kExitFailure;
      }
      continue;
    }
    std::cout << summary_text(outputs[i]->summary, true);
    std::cerr << "wrote " << outputs[i]->csv_path << "\n";
  }
  return code;
}

int cmd_verify(std::uint64_t seed, const std::string& work_dir, const std::string& self) {
  verification::Options options;
  options.seed = seed;
  options.work_dir = work_dir;
  options.cli_path = self;
  bool all = true;
  for (const auto& check : verification::acceptance_checks()) {
    const auto result = check.run(options);
    std::cout << verification::format_result(result) << std::endl;
    all = all && result.passed;
  }
  return all ? kExitOk : kExitFailure;
}

int cmd_list() {
  std::cout << "slit     two-slit traversal, alpha_e = 150 (override with --alpha-e)\n"
               "landing  directional-energy landing, alpha = 1 (override with --alpha)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rigid-body CBF safety-filter simulator"};
  app.require_subcommand(1);

  ScenarioArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Run one scenario, write CSV and summary");
  add_scenario_options(run_cmd, run_args);

  ScenarioArgs sweep_args;
  std::string param;
  std::vector<double> values;
  unsigned jobs = 1;
  auto* sweep_cmd = app.add_subcommand("sweep", "Repeat a scenario over parameter values");
  add_scenario_options(sweep_cmd, sweep_args);
  sweep_cmd->add_option("--param", param, "alpha_e, alpha, emax, dt or duration")
      ->required()
      ->check(CLI::IsMember({"alpha_e", "alpha", "emax", "dt", "duration"}));
  sweep_cmd->add_option("--values", values, "Comma-separated values")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--jobs", jobs, "Parallel runs (0 = all cores)");

  std::uint64_t seed = verification::Options{}.seed;
  std::string work_dir;
  auto* verify_cmd = app.add_subcommand("verify", "Run the acceptance checks");
  verify_cmd->add_option("--seed", seed, "Random seed");
  verify_cmd->add_option("--work-dir", work_dir, "Scratch directory");

  auto* list_cmd = app.add_subcommand("list", "List built-in presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run_cmd) return cmd_run(run_args);
    if (*sweep_cmd) return cmd_sweep(sweep_args, param, values, jobs);
    if (*verify_cmd) return cmd_verify(seed, work_dir, fs::absolute(argv[0]).string());
    if (*list_cmd) return cmd_list();
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const InfeasibleError& e) {
    std::cerr << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
