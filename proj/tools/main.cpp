// Copyright 2026 The xyrestore Authors
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

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>

#include "experiment.hpp"

namespace {

namespace app = xyrestore::app;

constexpr int kExitConfig = 2;
constexpr int kExitNoSolution = 3;
constexpr int kExitIo = 4;

struct Overrides {
  std::string config;
  std::optional<double> tau;
  std::optional<std::uint64_t> seed;
  std::optional<int> starts;
  std::optional<std::size_t> samples;
  std::optional<std::string> mode;
  std::optional<std::string> out;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON or TOML config file");
  cmd->add_option("--tau", o.tau, "Registration time (skips the scan)");
  cmd->add_option("--seed", o.seed, "Seed for the solver and the sampling");
  cmd->add_option("--starts", o.starts, "Number of least-squares starts");
  cmd->add_option("--samples", o.samples, "Number of scatter samples");
  cmd->add_option("--mode", o.mode, "Restored elements: all or even")
      ->check(CLI::IsMember({"all", "even", "all_orders", "even_only"}));
  cmd->add_option("--out", o.out, "Output directory");
}

// Compiled defaults, then the config file, then flags.
app::ExperimentConfig resolve(const Overrides& o) {
  app::ExperimentConfig cfg = o.config.empty() ? app::ExperimentConfig{} : app::load_config(o.config);
  if (o.tau) cfg.tau = *o.tau;
  if (o.seed) {
    cfg.solver.seed = *o.seed;
    cfg.sampling.seed = *o.seed;
  }
  if (o.starts) cfg.solver.n_starts = *o.starts;
  if (o.samples) cfg.sampling.n_samples = *o.samples;
  if (o.mode) cfg.mode = xyrestore::parse_restore_mode(*o.mode);
  if (o.out) cfg.output = *o.out;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Quantum-state transfer with receiver-side restoring on XY spin chains"};
  cli.require_subcommand(1);
  Overrides o;
  std::string solution_file;
  std::string state_file;

  auto* scan = cli.add_subcommand("scan-fidelity", "Scan the averaged fidelity for tau0");
  auto* solve = cli.add_subcommand("solve", "Solve the restoring system at tau0");
  auto* ent = cli.add_subcommand("entanglement", "Concurrence scatter, statistics and region map");
  auto* run = cli.add_subcommand("run-paper", "scan-fidelity, solve and entanglement in one run");
  auto* dec = cli.add_subcommand("decompose", "Multiple-quantum coherence orders of a state file");
  for (auto* c : {scan, solve, ent, run, dec}) add_common(c, o);
  ent->add_option("--solution", solution_file, "Solution JSON (default: <out>/best_solution.json)");
  dec->add_option("state", state_file, "State JSON file")->required();

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    const app::ExperimentConfig cfg = resolve(o);
    if (scan->parsed()) {
      app::cmd_scan_fidelity(cfg, &std::cout);
    } else if (solve->parsed()) {
      app::cmd_solve(cfg, &std::cout);
    } else if (ent->parsed()) {
      std::optional<std::filesystem::path> sol;
      if (!solution_file.empty()) sol = solution_file;
      app::cmd_entanglement(cfg, sol, &std::cout);
    } else if (run->parsed()) {
      app::cmd_run_pipeline(cfg, &std::cout);
    } else {
      app::cmd_decompose(cfg, state_file, &std::cout);
    }
  } catch (const app::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const xyrestore::NoSolutionError& e) {
    std::cerr << "no solution: " << e.what() << "\n";
    return kExitNoSolution;
  } catch (const app::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const xyrestore::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
