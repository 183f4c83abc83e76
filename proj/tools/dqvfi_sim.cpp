/*
 * Copyright 2026 The dqvfi Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Scenario runner: `run` simulates and logs, `check` validates a configuration.

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dqvfi/chain_io.hpp"
#include "dqvfi/scenario.hpp"

namespace {

namespace fs = std::filesystem;
using namespace dqvfi;

int run(const std::string& config_path, const std::string& which, const std::optional<double>& dt,
        const std::string& out_dir, bool strict) {
  const sim::ScenarioConfig cfg = sim::load_config(config_path);
  std::vector<sim::ScenarioSpec> selected;
  if (which == "all")
    selected = cfg.scenarios;
  else
    selected.push_back(cfg.scenario(which));

  const sim::RunOptions options{dt, strict};
  std::vector<std::future<sim::ScenarioResult>> jobs;
  for (const auto& spec : selected)
    jobs.push_back(std::async(std::launch::async, [&cfg, spec, options] { return sim::run_scenario(cfg, spec, options); }));

  fs::create_directories(out_dir);
  std::vector<sim::ScenarioSummary> summaries;
  bool all_match = true;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const sim::ScenarioResult r = jobs[i].get();
    sim::write_log((fs::path(out_dir) / (selected[i].name + ".csv")).string(), r.records, cfg.moving.chain.dof());
    summaries.push_back(r.summary);
    all_match = all_match && r.summary.matches();
  }
  std::ofstream summary(fs::path(out_dir) / "summary.txt");
  sim::write_summary(summary, summaries);
  sim::write_summary(std::cout, summaries);
  return all_match ? 0 : 1;
}

int check(const std::string& config_path) {
  const sim::ScenarioConfig cfg = sim::load_config(config_path);
  std::cout << config_path << ": ok, " << cfg.moving.chain.dof() << "-joint arm, " << cfg.poses.size()
            << " poses, " << cfg.scenarios.size() << " scenarios\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained dual-quaternion control scenarios"};
  app.require_subcommand(1);

  std::string config, scenario = "all", out = "out";
  std::optional<double> dt;
  bool strict = false;

  CLI::App* run_cmd = app.add_subcommand("run", "simulate scenarios and write CSV logs plus summary.txt");
  run_cmd->add_option("--config", config, "scenario configuration (JSON)")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--scenario", scenario, "scenario name or 'all'");
  run_cmd->add_option("--dt", dt, "control period override [s]")->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", out, "output directory");
  run_cmd->add_flag("--strict-singular", strict, "fail on singular distance Jacobians instead of omitting rows");

  CLI::App* check_cmd = app.add_subcommand("check", "validate a configuration");
  check_cmd->add_option("--config", config, "scenario configuration (JSON)")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run_cmd) return run(config, scenario, dt, out, strict);
    return check(config);
  } catch (const io::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
