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

#include <cstddef>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xyrestore/comm_line.hpp"
#include "xyrestore/least_squares.hpp"
#include "xyrestore/linalg.hpp"

namespace xyrestore {

/// Which receiver coherences the unitary has to restore.
enum class RestoreMode {
  /// Every element of nonzero coherence order.
  all_orders,
  /// Elements of nonzero even order only.
  even_only,
};

std::string to_string(RestoreMode mode);
/// Accepts "all", "all_orders", "even", "even_only".
RestoreMode parse_restore_mode(const std::string& text);

enum class GeneratorFlavor {
  /// theta (|p><q| + |q><p|): block [[c, i s], [i s, c]].
  symmetric,
  /// theta (-i|p><q| + i|q><p|): block [[c, s], [-s, c]].
  antisymmetric,
};

/// One-parameter generator acting on ER graded states p < q of equal parity.
struct Generator {
  std::size_t p = 0;
  std::size_t q = 0;
  GeneratorFlavor flavor = GeneratorFlavor::symmetric;
};

/// Number of real parameters of a parity-structured unitary on n sites.
std::size_t parameter_count(int n_extended);

/// All equal-parity pairs in ER graded order, both flavors, sorted by (p, q, flavor).
std::vector<Generator> parity_generators(int n_extended);

struct UnitaryParams {
  int n_extended = 0;
  std::vector<Generator> generators;
  std::vector<double> phi;
};

/// Default generator set with the given angles; zeros when `phi` is empty.
UnitaryParams make_unitary_params(int n_extended, std::vector<double> phi = {});

/**
 * U = g_1 g_2 ... g_P with g_j = exp(i A_j phi_j) in ER graded order. Throws
 * InvalidArgument for a generator whose states differ in parity or that is
 * out of range, DimensionError when phi and generators disagree in length.
 */
CMatrix build_unitary(const UnitaryParams& params);
CMatrix build_unitary(
    int n_extended, const std::vector<Generator>& generators,
    std::span<const double> phi);

/// Upper-triangle receiver element (graded indices, row < col).
struct ElementPos {
  std::size_t row = 0;
  std::size_t col = 0;
  bool operator==(const ElementPos&) const = default;
};

struct ElementSet {
  int n_receiver = 0;
  RestoreMode mode = RestoreMode::all_orders;
  std::vector<ElementPos> elements;

  /// Restored entries (both triangles) over all receiver entries.
  int fraction_numerator() const { return 2 * static_cast<int>(elements.size()); }
  int fraction_denominator() const { return 1 << (2 * n_receiver); }
  double fraction() const {
    return static_cast<double>(fraction_numerator()) / fraction_denominator();
  }
};

ElementSet restored_element_set(const CommLayout& layout, RestoreMode mode);

/// One restoring condition: lambda(target.row, target.col, a, b) = 0.
struct RestoringEquation {
  ElementPos target;
  std::size_t a = 0;
  std::size_t b = 0;
};

/**
 * Residual of the restoring conditions as a function of the ER unitary
 * parameters, at a fixed registration time. Each complex condition
 * contributes its real and imaginary parts.
 */
class RestoringSystem {
 public:
  RestoringSystem(TransferChannel channel, ElementSet targets);

  const TransferChannel& channel() const { return channel_; }
  const ElementSet& targets() const { return targets_; }
  const std::vector<RestoringEquation>& equations() const { return equations_; }
  const std::vector<Generator>& generators() const { return generators_; }
  std::size_t n_parameters() const { return generators_.size(); }
  std::size_t n_real_equations() const { return 2 * equations_.size(); }

  Eigen::VectorXd residual(std::span<const double> phi) const;
  /**
   * Central-difference Jacobian of residual() with step h. Shifting one angle
   * changes U by a rank-2 term, so each column costs O(dim^2) instead of a
   * full rebuild of U.
   */
  RMatrix jacobian(std::span<const double> phi, double step) const;
  /// lambda(i, j, i, j) for every target, in target order.
  std::vector<Complex> restored_lambdas(std::span<const double> phi) const;
  /// Full tensor of W = (I (x) U(phi)) V(tau).
  LambdaTensor tensor(std::span<const double> phi) const;

 private:
  /// Columns of W for all sender states: row a * n_outer + x, col ER index.
  CMatrix evolved_columns(std::span<const double> phi) const;
  Complex entry(const CMatrix& y, std::size_t i, std::size_t j, std::size_t a,
                std::size_t b) const;
  void fill_residual(const CMatrix& y, double* out) const;

  TransferChannel channel_;
  ElementSet targets_;
  std::vector<RestoringEquation> equations_;
  std::vector<Generator> generators_;
  CMatrix stacked_columns_;
  Eigen::Index n_outer_;
  /// ER graded indices (p, q) sharing the line part, grouped per receiver pair.
  std::vector<std::vector<std::pair<Eigen::Index, Eigen::Index>>> pairs_;
};

struct RestoredLambda {
  ElementPos pos;
  Complex value;
};

struct RestoreMetrics {
  int nr_numerator = 0;
  int nr_denominator = 1;
  double n_r = 0.0;
  /// Smallest and mean |lambda|; empty when nothing is restored.
  std::optional<double> lambda_min;
  std::optional<double> lambda_avr;
};

struct RestoreSolution {
  CommLayout layout;
  RestoreMode mode = RestoreMode::all_orders;
  double tau = 0.0;
  std::uint64_t seed = 0;
  int start = 0;
  std::vector<double> phi;
  double residual = 0.0;
  std::vector<RestoredLambda> lambdas;
  RestoreMetrics metrics;
};

/// Evaluates residual, restored lambdas and metrics of `phi`.
RestoreSolution evaluate_solution(
    const RestoringSystem& system, std::vector<double> phi);

/**
 * Multi-start least squares on the restoring conditions. Start k draws phi
 * uniformly from [-pi, pi]^P using stream k of `seed`. Returns the accepted
 * solutions (residual <= tol) ordered as select_optimal ranks them. Throws
 * NoSolutionError when no start is accepted.
 */
std::vector<RestoreSolution> solve_restoring(
    const RestoringSystem& system, int n_starts, std::uint64_t seed,
    const SolverOptions& options = {});

/// True when `x` ranks before `y`: larger Lambda, then larger mean, then smaller residual.
bool ranks_before(const RestoreSolution& x, const RestoreSolution& y);

/// Best solution under ranks_before. Throws InvalidArgument for an empty list.
RestoreSolution select_optimal(std::span<const RestoreSolution> solutions);

void to_json(nlohmann::json& j, const RestoreSolution& s);
void from_json(const nlohmann::json& j, RestoreSolution& s);

}  // namespace xyrestore
