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

#include "experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include <toml.hpp>

#include "xyrestore/coherence.hpp"
#include "xyrestore/entanglement.hpp"
#include "xyrestore/graded_basis.hpp"
#include "xyrestore/propagator.hpp"
#include "xyrestore/registration.hpp"

namespace xyrestore::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kReferenceFidelityAll = 0.2489;
constexpr double kReferenceFidelityEven = 0.6569;
constexpr double kReferenceThreshold = 0.561;

// ---------------------------------------------------------------- config

void read_value(const json& j, const std::string& path, int& out) {
  if (!j.is_number_integer()) throw ConfigError(path + ": expected an integer");
  out = j.get<int>();
}

void read_value(const json& j, const std::string& path, std::uint64_t& out) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    throw ConfigError(path + ": expected a non-negative integer");
  }
  out = j.get<std::uint64_t>();
}

void read_value(const json& j, const std::string& path, double& out) {
  if (!j.is_number()) throw ConfigError(path + ": expected a number");
  out = j.get<double>();
}

using FieldSetter = std::function<void(const json&, const std::string&)>;

template <class T>
FieldSetter setter(T& field) {
  return [&field](const json& j, const std::string& path) { read_value(j, path, field); };
}

void apply_section(
    const json& j, const std::string& name, const std::map<std::string, FieldSetter>& fields) {
  if (!j.is_object()) throw ConfigError(name + ": expected a table");
  for (const auto& [key, value] : j.items()) {
    const auto it = fields.find(key);
    if (it == fields.end()) throw ConfigError(name + "." + key + ": unknown key");
    it->second(value, name + "." + key);
  }
}

json toml_node_to_json(const toml::node& node) {
  if (const auto* t = node.as_table()) {
    json out = json::object();
    for (const auto& [k, v] : *t) out[std::string(k.str())] = toml_node_to_json(v);
    return out;
  }
  if (const auto* a = node.as_array()) {
    json out = json::array();
    for (const auto& v : *a) out.push_back(toml_node_to_json(v));
    return out;
  }
  if (const auto* v = node.as_integer()) return v->get();
  if (const auto* v = node.as_floating_point()) return v->get();
  if (const auto* v = node.as_boolean()) return v->get();
  if (const auto* v = node.as_string()) return v->get();
  throw ConfigError("config: dates and times are not valid values");
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw IoError("write failed for " + path.string());
}

void prepare_output(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string() +
                  (ec ? ": " + ec.message() : ""));
  }
}

// ------------------------------------------------------------- physics glue

Spectrum chain_spectrum(const ExperimentConfig& cfg) {
  return diagonalize(build_xy_hamiltonian(cfg.chain, build_graded_basis(cfg.chain.n_spins)));
}

StateMeasure sender_measure(int n_sender) {
  if (n_sender == 1) return StateMeasure::bloch();
  if (n_sender == 2) return StateMeasure::two_qubit();
  throw ConfigError("layout.n_sender: fidelity averaging supports 1 or 2 sender qubits");
}

StateMeasure mode_measure(const ExperimentConfig& cfg) {
  if (cfg.mode == RestoreMode::even_only && cfg.layout.n_sender == 2) {
    return StateMeasure::two_qubit_even();
  }
  return sender_measure(cfg.layout.n_sender);
}

std::string bits(std::size_t graded, const GradedBasis& basis) {
  std::string s;
  for (int k = basis.n_spins() - 1; k >= 0; --k) s += ((basis.mask(graded) >> k) & 1u) ? '1' : '0';
  return s;
}

std::string format_complex(Complex z) {
  std::ostringstream s;
  s.precision(6);
  s << std::fixed << "(" << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag())
    << "i)";
  return s.str();
}

std::string restored_report(
    const ExperimentConfig& cfg, const RestoreSolution& sol, const LambdaTensor& lambda,
    double fidelity, const std::string& measure_name) {
  const GradedBasis rb = build_graded_basis(sol.layout.n_receiver);
  const std::size_t dr = lambda.receiver_dim();
  const std::size_t ds = lambda.sender_dim();
  std::vector<std::vector<bool>> restored(dr, std::vector<bool>(dr, false));
  for (const auto& l : sol.lambdas) {
    restored[l.pos.row][l.pos.col] = true;
    restored[l.pos.col][l.pos.row] = true;
  }

  std::ostringstream out;
  out.precision(6);
  out << std::fixed;
  out << "Restored receiver state\n";
  out << "mode " << to_string(sol.mode) << ", N = " << sol.layout.n_total << ", tau = " << sol.tau
      << ", seed " << sol.seed << ", start " << sol.start << "\n";
  out << "residual " << std::scientific << sol.residual << std::fixed << "\n";
  out << "N_r = " << sol.metrics.nr_numerator << "/" << sol.metrics.nr_denominator;
  if (sol.metrics.lambda_min) {
    out << ", Lambda = " << *sol.metrics.lambda_min << ", Lambda_avr = " << *sol.metrics.lambda_avr;
  }
  out << "\n\nRestored elements, r_ij = lambda_ij s_ij (and r_ji = conj(lambda_ij) s_ji):\n";
  for (const auto& l : sol.lambdas) {
    out << "  r" << l.pos.row << l.pos.col << "  |" << bits(l.pos.row, rb) << "><"
        << bits(l.pos.col, rb) << "|  |lambda| = " << std::abs(l.value)
        << "  arg = " << std::arg(l.value) << "\n";
  }
  out << "\nUnrestored elements, full rows r_ij = sum_ab lambda(i,j,a,b) s_ab (i <= j):\n";
  for (std::size_t i = 0; i < dr; ++i) {
    for (std::size_t j = i; j < dr; ++j) {
      if (restored[i][j]) continue;
      out << "  r" << i << j << " =";
      bool any = false;
      for (std::size_t a = 0; a < ds; ++a) {
        for (std::size_t b = 0; b < ds; ++b) {
          const Complex c = lambda(i, j, a, b);
          if (std::abs(c) <= 1e-10) continue;
          out << (any ? "\n        + " : " ") << format_complex(c) << " s" << a << b;
          any = true;
        }
      }
      if (!any) out << " 0";
      out << "\n";
    }
  }
  const double reference =
      cfg.mode == RestoreMode::even_only ? kReferenceFidelityEven : kReferenceFidelityAll;
  out << "\nAveraged fidelity of the restored channel over the " << measure_name
      << " family: F = " << fidelity << "\n";
  out << "Reference value of a published solution: F = " << std::setprecision(4) << reference
      << " (solution dependent, not asserted)\n";
  return out.str();
}

double read_tau(const ExperimentConfig& cfg, FileList& files, std::ostream* log) {
  if (cfg.tau) return *cfg.tau;
  const fs::path summary = cfg.output / "fidelity_summary.json";
  if (!fs::exists(summary)) {
    const FileList scan = cmd_scan_fidelity(cfg, log);
    files.insert(files.end(), scan.begin(), scan.end());
  }
  const json j = read_json(summary);
  if (!j.contains("tau0") || !j["tau0"].is_number()) {
    throw ConfigError(summary.string() + ": missing tau0");
  }
  return j["tau0"].get<double>();
}

}  // namespace

// ------------------------------------------------------------------ config

CommLayout ExperimentConfig::comm_layout() const {
  return CommLayout{chain.n_spins, layout.n_sender, layout.n_receiver, layout.n_extended};
}

void ExperimentConfig::validate() const {
  try {
    chain.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("chain: ") + e.what());
  }
  try {
    comm_layout().validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("layout: ") + e.what());
  }
  if (!(scan.horizon > 0.0) || !std::isfinite(scan.horizon)) {
    throw ConfigError("scan.horizon: must be positive");
  }
  if (!(scan.step > 0.0) || scan.step > scan.horizon) {
    throw ConfigError("scan.step: must be in (0, horizon]");
  }
  if (solver.n_starts < 1) throw ConfigError("solver.n_starts: must be >= 1");
  if (!(solver.tol > 0.0)) throw ConfigError("solver.tol: must be positive");
  if (solver.max_iterations < 1) throw ConfigError("solver.max_iterations: must be >= 1");
  if (sampling.n_samples < 1) throw ConfigError("sampling.n_samples: must be >= 1");
  if (sampling.quad_nodes < 2) throw ConfigError("sampling.quad_nodes: must be >= 2");
  if (sampling.grid_size < 2) throw ConfigError("sampling.grid_size: must be >= 2");
  if (sampling.replicas < 2) throw ConfigError("sampling.replicas: must be >= 2");
  if (sampling.points_per_node < static_cast<std::size_t>(sampling.replicas)) {
    throw ConfigError("sampling.points_per_node: must be >= sampling.replicas");
  }
  if (sampling.region_chi < 2) throw ConfigError("sampling.region_chi: must be >= 2");
  if (sampling.region_phi < 2) throw ConfigError("sampling.region_phi: must be >= 2");
  if (tau && (!std::isfinite(*tau) || *tau < 0.0)) throw ConfigError("tau: must be >= 0");
  if (output.empty()) throw ConfigError("output: must not be empty");
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["chain"] = {{"n_spins", c.chain.n_spins}, {"coupling", c.chain.coupling}};
  j["layout"] = {{"n_sender", c.layout.n_sender},
                 {"n_receiver", c.layout.n_receiver},
                 {"n_extended", c.layout.n_extended}};
  j["mode"] = to_string(c.mode);
  j["scan"] = {{"horizon", c.scan.horizon}, {"step", c.scan.step}};
  j["solver"] = {{"n_starts", c.solver.n_starts},
                 {"seed", c.solver.seed},
                 {"tol", c.solver.tol},
                 {"max_iterations", c.solver.max_iterations}};
  j["sampling"] = {{"n_samples", c.sampling.n_samples},
                   {"seed", c.sampling.seed},
                   {"quad_nodes", c.sampling.quad_nodes},
                   {"grid_size", c.sampling.grid_size},
                   {"points_per_node", c.sampling.points_per_node},
                   {"replicas", c.sampling.replicas},
                   {"region_chi", c.sampling.region_chi},
                   {"region_phi", c.sampling.region_phi}};
  j["output"] = c.output.generic_string();
  j["tau"] = c.tau ? json(*c.tau) : json(nullptr);
  return j;
}

void apply_json(ExperimentConfig& c, const json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a table at the top level");
  for (const auto& [key, value] : j.items()) {
    if (key == "chain") {
      apply_section(value, key, {{"n_spins", setter(c.chain.n_spins)},
                                 {"coupling", setter(c.chain.coupling)}});
    } else if (key == "layout") {
      apply_section(value, key, {{"n_sender", setter(c.layout.n_sender)},
                                 {"n_receiver", setter(c.layout.n_receiver)},
                                 {"n_extended", setter(c.layout.n_extended)}});
    } else if (key == "scan") {
      apply_section(value, key, {{"horizon", setter(c.scan.horizon)},
                                 {"step", setter(c.scan.step)}});
    } else if (key == "solver") {
      apply_section(value, key, {{"n_starts", setter(c.solver.n_starts)},
                                 {"seed", setter(c.solver.seed)},
                                 {"tol", setter(c.solver.tol)},
                                 {"max_iterations", setter(c.solver.max_iterations)}});
    } else if (key == "sampling") {
      apply_section(value, key, {{"n_samples", setter(c.sampling.n_samples)},
                                 {"seed", setter(c.sampling.seed)},
                                 {"quad_nodes", setter(c.sampling.quad_nodes)},
                                 {"grid_size", setter(c.sampling.grid_size)},
                                 {"points_per_node", setter(c.sampling.points_per_node)},
                                 {"replicas", setter(c.sampling.replicas)},
                                 {"region_chi", setter(c.sampling.region_chi)},
                                 {"region_phi", setter(c.sampling.region_phi)}});
    } else if (key == "mode") {
      if (!value.is_string()) throw ConfigError("mode: expected a string");
      try {
        c.mode = parse_restore_mode(value.get<std::string>());
      } catch (const Error& e) {
        throw ConfigError(std::string("mode: ") + e.what());
      }
    } else if (key == "output") {
      if (!value.is_string()) throw ConfigError("output: expected a string");
      c.output = value.get<std::string>();
    } else if (key == "tau") {
      if (value.is_null()) {
        c.tau.reset();
      } else {
        double t = 0.0;
        read_value(value, "tau", t);
        c.tau = t;
      }
    } else {
      throw ConfigError(key + ": unknown key");
    }
  }
}

json toml_to_json(const std::string& text) {
  try {
    return toml_node_to_json(toml::parse(text));
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "TOML parse error at line " << e.source().begin.line << ": " << e.description();
    throw ConfigError(msg.str());
  }
}

ExperimentConfig load_config(const fs::path& path) {
  const std::string text = read_file(path);
  const std::string ext = path.extension().string();
  json j;
  if (ext == ".json") {
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(path.string() + ": " + e.what());
    }
  } else if (ext == ".toml") {
    j = toml_to_json(text);
  } else {
    throw ConfigError(path.string() + ": config files must end in .json or .toml");
  }
  ExperimentConfig cfg;
  apply_json(cfg, j);
  return cfg;
}

std::string config_hash(const ExperimentConfig& cfg) { return hex64(fnv1a(to_json(cfg).dump())); }

// -------------------------------------------------------------------- I/O

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(
    const fs::path& path, const std::vector<std::string>& header,
    const std::vector<std::vector<double>>& rows) {
  std::string text;
  for (std::size_t k = 0; k < header.size(); ++k) text += (k ? "," : "") + header[k];
  text += '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw DimensionError("write_csv: row width differs from header");
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) text += ',';
      text += format_double(row[k]);
    }
    text += '\n';
  }
  write_file(path, text);
}

CsvTable read_csv(const fs::path& path) {
  std::istringstream in(read_file(path));
  CsvTable t;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(s);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    return cells;
  };
  if (!std::getline(in, line)) throw IoError(path.string() + ": empty CSV");
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& cell : split(line)) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0') {
        throw IoError(path.string() + ": bad number '" + cell + "'");
      }
      row.push_back(v);
    }
    if (row.size() != t.header.size()) throw IoError(path.string() + ": ragged row");
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_json(const fs::path& path, const json& j) { write_file(path, j.dump(2) + "\n"); }

json read_json(const fs::path& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

// --------------------------------------------------------------- commands

FileList cmd_scan_fidelity(const ExperimentConfig& cfg, std::ostream* log) {
  cfg.validate();
  prepare_output(cfg.output);
  const StateMeasure measure = sender_measure(cfg.layout.n_sender);
  const FidelityEvaluator f(cfg.comm_layout(), chain_spectrum(cfg), measure, cfg.sampling.quad_nodes);
  const FidelityScan scan = scan_for_tau0(f, cfg.scan.horizon, cfg.scan.step);

  std::vector<std::vector<double>> rows;
  rows.reserve(scan.grid.size());
  for (const auto& [tau, fid] : scan.grid) rows.push_back({tau, fid});
  write_csv(cfg.output / "fidelity_scan.csv", {"tau", "fidelity"}, rows);
  write_json(cfg.output / "fidelity_summary.json",
             {{"tau0", scan.tau0},
              {"f0", scan.f0},
              {"boundary", scan.boundary},
              {"horizon", scan.horizon},
              {"step", scan.step},
              {"measure", measure.name()}});
  if (log) {
    *log << "tau0 = " << format_double(scan.tau0) << ", F(tau0) = " << format_double(scan.f0)
         << (scan.boundary ? " (maximum on the scan boundary)" : "") << "\n";
  }
  return {"fidelity_scan.csv", "fidelity_summary.json"};
}

LambdaTensor solution_tensor(const ExperimentConfig& cfg, const RestoreSolution& sol) {
  ExperimentConfig c = cfg;
  c.chain.n_spins = sol.layout.n_total;
  const RestoringSystem system(
      TransferChannel(sol.layout, chain_spectrum(c), sol.tau),
      restored_element_set(sol.layout, sol.mode));
  if (sol.phi.size() != system.n_parameters()) {
    throw ConfigError("solution: phi has the wrong length for its layout");
  }
  return system.tensor(sol.phi);
}

FileList cmd_solve(const ExperimentConfig& cfg, std::ostream* log) {
  cfg.validate();
  prepare_output(cfg.output);
  FileList files;
  const double tau = read_tau(cfg, files, log);
  const CommLayout layout = cfg.comm_layout();
  const RestoringSystem system(
      TransferChannel(layout, chain_spectrum(cfg), tau), restored_element_set(layout, cfg.mode));
  SolverOptions opts;
  opts.tol = cfg.solver.tol;
  opts.max_iterations = cfg.solver.max_iterations;
  const std::vector<RestoreSolution> solutions =
      solve_restoring(system, cfg.solver.n_starts, cfg.solver.seed, opts);
  const RestoreSolution& best = solutions.front();

  write_json(cfg.output / "solutions.json", json(solutions));
  write_json(cfg.output / "best_solution.json", json(best));

  const LambdaTensor lambda = system.tensor(best.phi);
  const StateMeasure measure = mode_measure(cfg);
  const double fidelity =
      averaged_fidelity(lambda, FourthMoments(measure, cfg.sampling.quad_nodes));
  write_file(cfg.output / "restored_report.txt",
             restored_report(cfg, best, lambda, fidelity, measure.name()));
  files.insert(files.end(), {"solutions.json", "best_solution.json", "restored_report.txt"});
  if (log) {
    *log << solutions.size() << " of " << cfg.solver.n_starts << " starts accepted; best";
    if (best.metrics.lambda_min) {
      *log << " Lambda = " << format_double(*best.metrics.lambda_min)
           << ", Lambda_avr = " << format_double(*best.metrics.lambda_avr);
    }
    *log << ", restored-channel F = " << format_double(fidelity) << "\n";
  }
  return files;
}

FileList cmd_entanglement(
    const ExperimentConfig& cfg, const std::optional<fs::path>& solution_file,
    std::ostream* log) {
  cfg.validate();
  prepare_output(cfg.output);
  const fs::path path = solution_file.value_or(cfg.output / "best_solution.json");
  RestoreSolution sol;
  try {
    sol = read_json(path).get<RestoreSolution>();
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": not a solution file: " + e.what());
  }
  if (sol.mode != cfg.mode) {
    throw ConfigError("mode: solution was computed for " + to_string(sol.mode) +
                      " but the config asks for " + to_string(cfg.mode));
  }
  if (sol.layout.n_sender != 2 || sol.layout.n_receiver != 2) {
    throw ConfigError("layout: concurrence needs two sender and two receiver qubits");
  }
  const LambdaTensor lambda = solution_tensor(cfg, sol);
  FileList files;

  if (cfg.mode == RestoreMode::even_only) {
    const RegionMap m = region_map_even(lambda, cfg.sampling.region_chi, cfg.sampling.region_phi);
    std::vector<std::vector<double>> rows;
    double sin_dev = 0.0;
    double max_excess = -1.0;
    std::size_t n_zero = 0;
    for (std::size_t c = 0; c < m.chi.size(); ++c) {
      for (std::size_t p = 0; p < m.phi.size(); ++p) {
        rows.push_back({m.chi[c], m.phi[p], m.c_sender(c, p), m.c_receiver(c, p)});
        sin_dev = std::max(sin_dev, std::abs(m.c_sender(c, p) - std::sin(m.phi[p])));
        max_excess = std::max(max_excess, m.c_receiver(c, p) - m.c_sender(c, p));
        n_zero += m.c_receiver(c, p) <= m.threshold;
      }
    }
    write_csv(cfg.output / "region_map.csv", {"chi", "phi", "c_s", "c_r"}, rows);
    json boundary = json::array();
    for (std::size_t c = 0; c < m.chi.size(); ++c) {
      boundary.push_back({{"chi", m.chi[c]}, {"phi", m.zero_boundary[c]}});
    }
    write_json(cfg.output / "region_summary.json",
               {{"n_chi", m.chi.size()},
                {"n_phi", m.phi.size()},
                {"threshold", m.threshold},
                {"max_abs_c_s_minus_sin_phi", sin_dev},
                {"max_c_r_minus_c_s", max_excess},
                {"zero_fraction", static_cast<double>(n_zero) / rows.size()},
                {"zero_boundary", boundary}});
    files.insert(files.end(), {"region_map.csv", "region_summary.json"});
    if (log) {
      *log << "region map " << m.chi.size() << "x" << m.phi.size()
           << ": max(C_r - C_s) = " << format_double(max_excess)
           << ", C_r = 0 on a fraction " << format_double(static_cast<double>(n_zero) / rows.size())
           << "\n";
    }
    return files;
  }

  const auto samples = scatter_experiment(lambda, cfg.sampling.n_samples, cfg.sampling.seed);
  std::vector<std::vector<double>> rows;
  rows.reserve(samples.size());
  for (const auto& s : samples) {
    rows.push_back({s.params.phi0, s.params.phi1, s.params.phi2, s.params.chi1, s.params.chi2,
                    s.params.chi3, s.c_sender, s.c_receiver});
  }
  write_csv(cfg.output / "scatter.csv",
            {"phi0", "phi1", "phi2", "chi1", "chi2", "chi3", "c_s", "c_r"}, rows);
  files.push_back("scatter.csv");
  const AmplificationSummary amp = amplification_summary(samples);

  StatsOptions so;
  so.grid_size = cfg.sampling.grid_size;
  so.points_per_node = cfg.sampling.points_per_node;
  so.replicas = cfg.sampling.replicas;
  so.seed = cfg.sampling.seed;
  json table = json::object();
  for (Party party : {Party::sender, Party::receiver}) {
    json side = json::object();
    for (StateParameter p :
         {StateParameter::phi0, StateParameter::phi1, StateParameter::phi2, StateParameter::chi1,
          StateParameter::chi2, StateParameter::chi3}) {
      const ConcurrenceStats st = one_param_stats(party, p, lambda, so);
      std::vector<std::vector<double>> srows;
      for (std::size_t g = 0; g < st.values.size(); ++g) {
        srows.push_back({st.values[g], st.mean[g], st.delta[g]});
      }
      const std::string name = "stats_" + to_string(party) + "_" + to_string(p) + ".csv";
      write_csv(cfg.output / name, {"a_value", "mean", "delta"}, srows);
      files.push_back(name);
      side[to_string(p)] = {
          {"Delta", st.Delta},
          {"delta_min", st.delta_min},
          {"delta_max", st.delta_max},
          {"stderr", *std::max_element(st.stderr_mean.begin(), st.stderr_mean.end())},
          {"endpoint_difference", st.mean.back() - st.mean.front()}};
      if (log) {
        *log << to_string(party) << " " << to_string(p) << ": Delta = " << format_double(st.Delta)
             << ", delta in [" << format_double(st.delta_min) << ", "
             << format_double(st.delta_max) << "]\n";
      }
    }
    table[to_string(party)] = side;
  }
  table["points_per_node"] = cfg.sampling.points_per_node;
  table["grid_size"] = cfg.sampling.grid_size;
  table["reference_sender_Delta"] = {
      {"phi0", 0.389}, {"phi1", 0.540}, {"phi2", 0.499}, {"chi1", 0.001}, {"chi2", 0.001},
      {"chi3", 0.001}};
  table["amplification"] = {{"n_samples", amp.n_samples},
                            {"n_amplified", amp.n_amplified},
                            {"empirical_threshold", amp.max_amplified_sender},
                            {"reference_threshold", kReferenceThreshold}};
  write_json(cfg.output / "concurrence_summary.json", table);
  files.push_back("concurrence_summary.json");
  if (log) {
    *log << amp.n_amplified << " of " << amp.n_samples
         << " samples with C_r > C_s; largest such C_s = "
         << format_double(amp.max_amplified_sender) << "\n";
  }
  return files;
}

FileList cmd_run_pipeline(const ExperimentConfig& cfg, std::ostream* log) {
  cfg.validate();
  prepare_output(cfg.output);
  FileList files;
  if (!cfg.tau) {
    const FileList scan = cmd_scan_fidelity(cfg, log);
    files.insert(files.end(), scan.begin(), scan.end());
  }
  for (const FileList& part : {cmd_solve(cfg, log), cmd_entanglement(cfg, std::nullopt, log)}) {
    files.insert(files.end(), part.begin(), part.end());
  }
  std::sort(files.begin(), files.end());
  files.erase(std::unique(files.begin(), files.end()), files.end());

  json listed = json::array();
  for (const auto& name : files) {
    const std::string bytes = read_file(cfg.output / name);
    listed.push_back({{"name", name}, {"bytes", bytes.size()}, {"fnv1a", hex64(fnv1a(bytes))}});
  }
  write_json(cfg.output / "manifest.json",
             {{"config", to_json(cfg)},
              {"config_hash", config_hash(cfg)},
              {"solver_seed", cfg.solver.seed},
              {"sampling_seed", cfg.sampling.seed},
              {"files", listed}});
  files.push_back("manifest.json");
  if (log) *log << "wrote " << files.size() << " files to " << cfg.output.string() << "\n";
  return files;
}

FileList cmd_decompose(
    const ExperimentConfig& cfg, const fs::path& state_file, std::ostream* log) {
  prepare_output(cfg.output);
  const json j = read_json(state_file);
  auto complex_from = [&](const json& v, const char* what) {
    if (!v.is_object() || !v.contains("re") || !v.contains("im")) {
      throw ConfigError(state_file.string() + ": " + what + " needs \"re\" and \"im\"");
    }
    return std::make_pair(v["re"], v["im"]);
  };
  if (!j.contains("n_spins") || !j["n_spins"].is_number_integer()) {
    throw ConfigError(state_file.string() + ": missing integer n_spins");
  }
  const int n = j["n_spins"].get<int>();
  const GradedBasis basis = build_graded_basis(n);
  const Eigen::Index dim = static_cast<Eigen::Index>(basis.dim());
  CMatrix rho;
  try {
    if (j.contains("psi")) {
      const auto [re, im] = complex_from(j["psi"], "psi");
      if (re.size() != static_cast<std::size_t>(dim) || im.size() != re.size()) {
        throw ConfigError(state_file.string() + ": psi must have 2^n_spins entries");
      }
      CVector psi(dim);
      for (Eigen::Index k = 0; k < dim; ++k) psi[k] = Complex(re[k].get<double>(), im[k].get<double>());
      rho = psi * psi.adjoint();
    } else if (j.contains("rho")) {
      const auto [re, im] = complex_from(j["rho"], "rho");
      if (re.size() != static_cast<std::size_t>(dim) || im.size() != re.size()) {
        throw ConfigError(state_file.string() + ": rho must be 2^n_spins square");
      }
      rho.resize(dim, dim);
      for (Eigen::Index r = 0; r < dim; ++r) {
        if (re[r].size() != static_cast<std::size_t>(dim) || im[r].size() != re[r].size()) {
          throw ConfigError(state_file.string() + ": rho must be 2^n_spins square");
        }
        for (Eigen::Index c = 0; c < dim; ++c) {
          rho(r, c) = Complex(re[r][c].get<double>(), im[r][c].get<double>());
        }
      }
    } else {
      throw ConfigError(state_file.string() + ": needs \"psi\" or \"rho\"");
    }
  } catch (const json::exception& e) {
    throw ConfigError(state_file.string() + ": " + e.what());
  }

  const CoherenceDecomposition d = decompose(basis.to_graded(rho), basis);
  std::vector<std::vector<double>> rows;
  json orders = json::array();
  for (int k = -n; k <= n; ++k) {
    const CMatrix& m = d.order(k);
    rows.push_back({static_cast<double>(k), max_norm(m), m.norm()});
    orders.push_back({{"order", k}, {"max_norm", max_norm(m)}, {"frobenius_norm", m.norm()}});
    if (log && max_norm(m) > 1e-12) {
      *log << "order " << k << ": max |entry| = " << format_double(max_norm(m)) << "\n";
    }
  }
  write_csv(cfg.output / "coherence_orders.csv", {"order", "max_norm", "frobenius_norm"}, rows);
  write_json(cfg.output / "coherence_orders.json",
             {{"n_spins", n}, {"orders", orders}, {"populated", d.populated_orders(1e-12)}});
  return {"coherence_orders.csv", "coherence_orders.json"};
}

}  // namespace xyrestore::app
