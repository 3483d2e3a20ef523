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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "xyrestore/comm_line.hpp"
#include "xyrestore/errors.hpp"
#include "xyrestore/hamiltonian.hpp"
#include "xyrestore/restoring.hpp"

namespace xyrestore::app {

/** Invalid configuration; the message names the offending field. Exit code 2. */
class ConfigError : public Error {
 public:
  using Error::Error;
};

/** A file or directory could not be read or written. Exit code 4. */
class IoError : public Error {
 public:
  using Error::Error;
};

struct LayoutConfig {
  int n_sender = 2;
  int n_receiver = 2;
  int n_extended = 4;
};

struct ScanConfig {
  double horizon = 100.0;
  double step = 0.01;
};

struct SolverConfig {
  int n_starts = 1000;
  std::uint64_t seed = 42;
  double tol = 1e-8;
  int max_iterations = 400;
};

struct SamplingConfig {
  std::size_t n_samples = 100000;
  std::uint64_t seed = 42;
  /// Gauss-Legendre nodes per angle for averaged fidelities.
  int quad_nodes = 32;
  /// Nodes of the held parameter in one-parameter statistics.
  int grid_size = 20;
  std::size_t points_per_node = 131072;
  int replicas = 16;
  int region_chi = 100;
  int region_phi = 100;
};

struct ExperimentConfig {
  ChainConfig chain;
  LayoutConfig layout;
  RestoreMode mode = RestoreMode::all_orders;
  ScanConfig scan;
  SolverConfig solver;
  SamplingConfig sampling;
  std::filesystem::path output = "out";
  /// Registration time; when absent it is taken from a previous scan.
  std::optional<double> tau;

  CommLayout comm_layout() const;
  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& cfg);

/**
 * Applies the keys of `j` on top of `cfg`. Unknown keys and values of the
 * wrong type raise ConfigError with the dotted key path.
 */
void apply_json(ExperimentConfig& cfg, const nlohmann::json& j);

/// Reads a .json or .toml document (chosen by extension) over the defaults.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Parses TOML text into the equivalent JSON value.
nlohmann::json toml_to_json(const std::string& text);

/// FNV-1a 64-bit hash of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

/// Shortest decimal form that reads back to the same double (17 significant digits).
std::string format_double(double x);

/// Writes rows with a header, ',' separator and LF line endings.
void write_csv(
    const std::filesystem::path& path, const std::vector<std::string>& header,
    const std::vector<std::vector<double>>& rows);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

/// Log lines go to `log` when it is non-null.
/// Files written by a command, relative to the output directory.
using FileList = std::vector<std::string>;

FileList cmd_scan_fidelity(const ExperimentConfig& cfg, std::ostream* log = nullptr);
FileList cmd_solve(const ExperimentConfig& cfg, std::ostream* log = nullptr);
/// `solution_file` defaults to best_solution.json in the output directory.
FileList cmd_entanglement(
    const ExperimentConfig& cfg, const std::optional<std::filesystem::path>& solution_file,
    std::ostream* log = nullptr);
/// scan, solve and entanglement in sequence, then manifest.json.
FileList cmd_run_pipeline(const ExperimentConfig& cfg, std::ostream* log = nullptr);
/**
 * Reads a state file (JSON with "n_spins" and either "psi" or "rho", each
 * given as {"re": ..., "im": ...} in computational order) and writes the
 * norms of its multiple-quantum coherence orders.
 */
FileList cmd_decompose(
    const ExperimentConfig& cfg, const std::filesystem::path& state_file,
    std::ostream* log = nullptr);

/// Lambda-tensor of a stored solution, rebuilt from its layout, tau and phi.
LambdaTensor solution_tensor(const ExperimentConfig& cfg, const RestoreSolution& solution);

}  // namespace xyrestore::app
