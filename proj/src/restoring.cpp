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

#include "xyrestore/restoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "xyrestore/errors.hpp"
#include "xyrestore/graded_basis.hpp"
#include "xyrestore/parallel.hpp"

namespace xyrestore {

std::string to_string(RestoreMode mode) {
  return mode == RestoreMode::all_orders ? "all_orders" : "even_only";
}

RestoreMode parse_restore_mode(const std::string& text) {
  if (text == "all" || text == "all_orders") return RestoreMode::all_orders;
  if (text == "even" || text == "even_only") return RestoreMode::even_only;
  throw InvalidArgument("unknown restore mode '" + text + "'");
}

std::size_t parameter_count(int n_extended) {
  const GradedBasis b = build_graded_basis(n_extended);
  std::size_t even = 0;
  for (int n = 0; n <= n_extended; n += 2) even += b.block_size(n);
  const std::size_t odd = b.dim() - even;
  return even * even + odd * odd - b.dim();
}

std::vector<Generator> parity_generators(int n_extended) {
  const GradedBasis b = build_graded_basis(n_extended);
  std::vector<Generator> out;
  for (std::size_t p = 0; p < b.dim(); ++p) {
    for (std::size_t q = p + 1; q < b.dim(); ++q) {
      if ((b.excitation(p) - b.excitation(q)) % 2 != 0) continue;
      out.push_back({p, q, GeneratorFlavor::symmetric});
      out.push_back({p, q, GeneratorFlavor::antisymmetric});
    }
  }
  return out;
}

UnitaryParams make_unitary_params(int n_extended, std::vector<double> phi) {
  UnitaryParams params{n_extended, parity_generators(n_extended), std::move(phi)};
  if (params.phi.empty()) params.phi.assign(params.generators.size(), 0.0);
  if (params.phi.size() != params.generators.size()) {
    throw DimensionError(
        "expected " + std::to_string(params.generators.size()) + " angles, got " +
        std::to_string(params.phi.size()));
  }
  return params;
}

namespace {

/// u <- u g_1 g_2 ... g_P for generators already known to be valid.
void apply_generators(
    CMatrix& u, const std::vector<Generator>& generators, std::span<const double> phi) {
  const Eigen::Index dim = u.rows();
  for (std::size_t k = 0; k < generators.size(); ++k) {
    if (phi[k] == 0.0) continue;
    const Generator& g = generators[k];
    const double c = std::cos(phi[k]);
    const double s = std::sin(phi[k]);
    const bool symmetric = g.flavor == GeneratorFlavor::symmetric;
    const Complex off_pq = symmetric ? Complex(0.0, s) : Complex(s, 0.0);
    const Complex off_qp = symmetric ? Complex(0.0, s) : Complex(-s, 0.0);
    Complex* col_p = u.col(static_cast<Eigen::Index>(g.p)).data();
    Complex* col_q = u.col(static_cast<Eigen::Index>(g.q)).data();
    for (Eigen::Index r = 0; r < dim; ++r) {
      const Complex up = col_p[r];
      const Complex uq = col_q[r];
      col_p[r] = c * up + off_qp * uq;
      col_q[r] = off_pq * up + c * uq;
    }
  }
}

void validate_generators(const GradedBasis& b, const std::vector<Generator>& generators) {
  for (const Generator& g : generators) {
    if (g.p >= b.dim() || g.q >= b.dim() || g.p == g.q) {
      throw InvalidArgument("generator indices out of range");
    }
    if ((b.excitation(g.p) - b.excitation(g.q)) % 2 != 0) {
      throw InvalidArgument(
          "generator couples states " + std::to_string(g.p) + " and " +
          std::to_string(g.q) + " of different parity");
    }
  }
}

}  // namespace

CMatrix build_unitary(
    int n_extended, const std::vector<Generator>& generators,
    std::span<const double> phi) {
  if (phi.size() != generators.size()) {
    throw DimensionError(
        "expected " + std::to_string(generators.size()) + " angles, got " +
        std::to_string(phi.size()));
  }
  const GradedBasis b = build_graded_basis(n_extended);
  validate_generators(b, generators);
  const auto dim = static_cast<Eigen::Index>(b.dim());
  CMatrix u = CMatrix::Identity(dim, dim);
  apply_generators(u, generators, phi);
  return u;
}

CMatrix build_unitary(const UnitaryParams& params) {
  return build_unitary(params.n_extended, params.generators, params.phi);
}

ElementSet restored_element_set(const CommLayout& layout, RestoreMode mode) {
  layout.validate();
  const GradedBasis b = build_graded_basis(layout.n_receiver);
  ElementSet set{layout.n_receiver, mode, {}};
  for (std::size_t i = 0; i < b.dim(); ++i) {
    for (std::size_t j = i + 1; j < b.dim(); ++j) {
      const int order = b.excitation(j) - b.excitation(i);
      if (order == 0) continue;
      if (mode == RestoreMode::even_only && order % 2 != 0) continue;
      set.elements.push_back({i, j});
    }
  }
  return set;
}

RestoringSystem::RestoringSystem(TransferChannel channel, ElementSet targets)
    : channel_(std::move(channel)), targets_(std::move(targets)) {
  const CommLayout& layout = channel_.layout();
  if (targets_.n_receiver != layout.n_receiver) {
    throw DimensionError("element set does not match the receiver size");
  }
  generators_ = parity_generators(layout.n_extended);

  const LambdaTensor shape(layout.n_receiver, layout.n_sender);
  const std::size_t dr = layout.receiver_dim();
  const std::size_t ds = layout.sender_dim();
  for (const ElementPos& t : targets_.elements) {
    if (t.row >= t.col || t.col >= dr) {
      throw InvalidArgument("restored elements must be upper-triangle receiver entries");
    }
    for (std::size_t a = 0; a < ds; ++a) {
      for (std::size_t b = 0; b < ds; ++b) {
        if (a == t.row && b == t.col) continue;
        if (shape.structurally_zero(t.row, t.col, a, b)) continue;
        equations_.push_back({t, a, b});
      }
    }
  }

  const auto& columns = channel_.sender_columns();
  n_outer_ = columns.front().rows();
  stacked_columns_.resize(n_outer_ * static_cast<Eigen::Index>(ds), columns.front().cols());
  for (std::size_t a = 0; a < ds; ++a) {
    stacked_columns_.middleRows(static_cast<Eigen::Index>(a) * n_outer_, n_outer_) = columns[a];
  }

  const auto& line = channel_.er_line_part();
  const auto& recv = channel_.er_receiver_index();
  pairs_.assign(dr * dr, {});
  for (std::size_t p = 0; p < line.size(); ++p) {
    for (std::size_t q = 0; q < line.size(); ++q) {
      if (line[p] != line[q]) continue;
      pairs_[recv[p] * dr + recv[q]].emplace_back(
          static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
    }
  }
}

CMatrix RestoringSystem::evolved_columns(std::span<const double> phi) const {
  if (phi.size() != generators_.size()) {
    throw DimensionError(
        "expected " + std::to_string(generators_.size()) + " angles, got " +
        std::to_string(phi.size()));
  }
  const Eigen::Index dim = stacked_columns_.cols();
  CMatrix u = CMatrix::Identity(dim, dim);
  apply_generators(u, generators_, phi);
  return stacked_columns_ * u.transpose();
}

Complex RestoringSystem::entry(
    const CMatrix& y, std::size_t i, std::size_t j, std::size_t a,
    std::size_t b) const {
  const std::size_t dr = channel_.layout().receiver_dim();
  const Eigen::Index row_a = static_cast<Eigen::Index>(a) * n_outer_;
  const Eigen::Index row_b = static_cast<Eigen::Index>(b) * n_outer_;
  Complex acc{0.0, 0.0};
  for (const auto& [p, q] : pairs_[i * dr + j]) {
    for (Eigen::Index x = 0; x < n_outer_; ++x) {
      acc += y(row_a + x, p) * std::conj(y(row_b + x, q));
    }
  }
  return acc;
}

void RestoringSystem::fill_residual(const CMatrix& y, double* out) const {
  for (std::size_t k = 0; k < equations_.size(); ++k) {
    const auto& e = equations_[k];
    const Complex v = entry(y, e.target.row, e.target.col, e.a, e.b);
    out[2 * k] = v.real();
    out[2 * k + 1] = v.imag();
  }
}

Eigen::VectorXd RestoringSystem::residual(std::span<const double> phi) const {
  Eigen::VectorXd r(n_real_equations());
  fill_residual(evolved_columns(phi), r.data());
  return r;
}

RMatrix RestoringSystem::jacobian(std::span<const double> phi, double step) const {
  const std::size_t n = generators_.size();
  if (phi.size() != n) {
    throw DimensionError(
        "expected " + std::to_string(n) + " angles, got " + std::to_string(phi.size()));
  }
  const Eigen::Index dim = stacked_columns_.cols();
  auto block = [](const Generator& g, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Eigen::Matrix2cd m;
    if (g.flavor == GeneratorFlavor::symmetric) {
      m << c, Complex(0.0, s), Complex(0.0, s), c;
    } else {
      m << c, s, -s, c;
    }
    return m;
  };

  // Rows p_j, q_j of the suffix g_{j+1} ... g_P, for every j.
  std::vector<Eigen::Matrix<Complex, 2, Eigen::Dynamic>> suffix_rows(n);
  CMatrix suffix = CMatrix::Identity(dim, dim);
  for (std::size_t j = n; j-- > 0;) {
    const Generator& g = generators_[j];
    const auto p = static_cast<Eigen::Index>(g.p);
    const auto q = static_cast<Eigen::Index>(g.q);
    suffix_rows[j].resize(2, dim);
    suffix_rows[j].row(0) = suffix.row(p);
    suffix_rows[j].row(1) = suffix.row(q);
    const Eigen::Matrix2cd b = block(g, phi[j]);
    const Eigen::Matrix<Complex, 2, Eigen::Dynamic> rows = b * suffix_rows[j];
    suffix.row(p) = rows.row(0);
    suffix.row(q) = rows.row(1);
  }

  const CMatrix y = stacked_columns_ * suffix.transpose();
  RMatrix jac(n_real_equations(), static_cast<Eigen::Index>(n));
  Eigen::VectorXd plus(n_real_equations());
  Eigen::VectorXd minus(n_real_equations());
  CMatrix y_shift(y.rows(), y.cols());
  CMatrix prefix = CMatrix::Identity(dim, dim);
  for (std::size_t j = 0; j < n; ++j) {
    const Generator& g = generators_[j];
    const auto p = static_cast<Eigen::Index>(g.p);
    const auto q = static_cast<Eigen::Index>(g.q);
    Eigen::Matrix<Complex, Eigen::Dynamic, 2> left(dim, 2);
    left.col(0) = prefix.col(p);
    left.col(1) = prefix.col(q);
    const Eigen::Matrix2cd b0 = block(g, phi[j]);
    // U(phi_j + d) - U(phi_j) = left (b(phi_j + d) - b0) suffix_rows.
    const Eigen::Matrix<Complex, Eigen::Dynamic, 2> m_right =
        stacked_columns_ * suffix_rows[j].transpose();
    for (int sign : {1, -1}) {
      const Eigen::Matrix2cd delta = block(g, phi[j] + sign * step) - b0;
      y_shift = y;
      y_shift.noalias() += m_right * delta.transpose() * left.transpose();
      fill_residual(y_shift, (sign > 0 ? plus : minus).data());
    }
    jac.col(static_cast<Eigen::Index>(j)) = (plus - minus) / (2.0 * step);
    const Eigen::Matrix<Complex, Eigen::Dynamic, 2> cols = left * b0;
    prefix.col(p) = cols.col(0);
    prefix.col(q) = cols.col(1);
  }
  return jac;
}

std::vector<Complex> RestoringSystem::restored_lambdas(std::span<const double> phi) const {
  const CMatrix y = evolved_columns(phi);
  std::vector<Complex> out;
  out.reserve(targets_.elements.size());
  for (const ElementPos& t : targets_.elements) {
    out.push_back(entry(y, t.row, t.col, t.row, t.col));
  }
  return out;
}

LambdaTensor RestoringSystem::tensor(std::span<const double> phi) const {
  LambdaTensor out =
      channel_.lambda(build_unitary(channel_.layout().n_extended, generators_, phi));
  out.phi.assign(phi.begin(), phi.end());
  return out;
}

RestoreSolution evaluate_solution(
    const RestoringSystem& system, std::vector<double> phi) {
  RestoreSolution s;
  s.layout = system.channel().layout();
  s.mode = system.targets().mode;
  s.tau = system.channel().tau();
  s.residual = system.residual(phi).norm();
  const std::vector<Complex> values = system.restored_lambdas(phi);
  const auto& elements = system.targets().elements;
  double sum = 0.0;
  double min = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < values.size(); ++k) {
    s.lambdas.push_back({elements[k], values[k]});
    sum += std::abs(values[k]);
    min = std::min(min, std::abs(values[k]));
  }
  s.metrics.nr_numerator = system.targets().fraction_numerator();
  s.metrics.nr_denominator = system.targets().fraction_denominator();
  s.metrics.n_r = system.targets().fraction();
  if (!values.empty()) {
    s.metrics.lambda_min = min;
    s.metrics.lambda_avr = sum / static_cast<double>(values.size());
  }
  s.phi = std::move(phi);
  return s;
}

bool ranks_before(const RestoreSolution& x, const RestoreSolution& y) {
  const double lx = x.metrics.lambda_min.value_or(0.0);
  const double ly = y.metrics.lambda_min.value_or(0.0);
  if (lx != ly) return lx > ly;
  const double ax = x.metrics.lambda_avr.value_or(0.0);
  const double ay = y.metrics.lambda_avr.value_or(0.0);
  if (ax != ay) return ax > ay;
  return x.residual < y.residual;
}

std::vector<RestoreSolution> solve_restoring(
    const RestoringSystem& system, int n_starts, std::uint64_t seed,
    const SolverOptions& options) {
  if (n_starts < 1) throw InvalidArgument("solve_restoring: n_starts must be positive");
  if (!(options.tol > 0.0)) throw InvalidArgument("solve_restoring: tol must be positive");

  const std::size_t n_params = system.n_parameters();
  const ResidualFunction f = [&system](const Eigen::VectorXd& phi) {
    return system.residual(std::span<const double>(phi.data(), phi.size()));
  };
  const JacobianFunction jac = [&system, &options](const Eigen::VectorXd& phi) {
    return system.jacobian(std::span<const double>(phi.data(), phi.size()), options.fd_step);
  };

  std::vector<std::optional<RestoreSolution>> accepted(n_starts);
  std::vector<double> residuals(n_starts, std::numeric_limits<double>::infinity());
  parallel_for(static_cast<std::size_t>(n_starts), [&](std::size_t k) {
    std::mt19937_64 engine = stream_engine(seed, k);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    Eigen::VectorXd phi0(static_cast<Eigen::Index>(n_params));
    for (Eigen::Index p = 0; p < phi0.size(); ++p) phi0[p] = angle(engine);
    const LeastSquaresResult lm = levenberg_marquardt(f, jac, phi0, options);
    residuals[k] = lm.residual_norm;
    if (!lm.converged) return;
    RestoreSolution s =
        evaluate_solution(system, std::vector<double>(lm.x.data(), lm.x.data() + lm.x.size()));
    s.seed = seed;
    s.start = static_cast<int>(k);
    accepted[k] = std::move(s);
  });

  std::vector<RestoreSolution> out;
  for (auto& s : accepted) {
    if (s) out.push_back(std::move(*s));
  }
  if (out.empty()) {
    throw NoSolutionError(n_starts, *std::min_element(residuals.begin(), residuals.end()));
  }
  std::stable_sort(out.begin(), out.end(), ranks_before);
  return out;
}

RestoreSolution select_optimal(std::span<const RestoreSolution> solutions) {
  if (solutions.empty()) throw InvalidArgument("select_optimal: no solutions");
  const RestoreSolution* best = &solutions.front();
  for (const auto& s : solutions) {
    if (ranks_before(s, *best)) best = &s;
  }
  return *best;
}

void to_json(nlohmann::json& j, const RestoreSolution& s) {
  nlohmann::json lambdas = nlohmann::json::array();
  for (const auto& l : s.lambdas) {
    lambdas.push_back({
        {"pos", {l.pos.row, l.pos.col}},
        {"re", l.value.real()},
        {"im", l.value.imag()},
        {"abs", std::abs(l.value)},
        {"arg", std::arg(l.value)},
    });
  }
  auto optional_number = [](const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  j = {
      {"layout",
       {{"n_total", s.layout.n_total},
        {"n_sender", s.layout.n_sender},
        {"n_receiver", s.layout.n_receiver},
        {"n_extended", s.layout.n_extended}}},
      {"tau", s.tau},
      {"mode", to_string(s.mode)},
      {"seed", s.seed},
      {"start", s.start},
      {"phi", s.phi},
      {"residual", s.residual},
      {"lambdas", lambdas},
      {"metrics",
       {{"n_r", s.metrics.n_r},
        {"n_r_fraction", {s.metrics.nr_numerator, s.metrics.nr_denominator}},
        {"Lambda", optional_number(s.metrics.lambda_min)},
        {"Lambda_avr", optional_number(s.metrics.lambda_avr)}}},
  };
}

void from_json(const nlohmann::json& j, RestoreSolution& s) {
  const auto& l = j.at("layout");
  s.layout.n_total = l.at("n_total").get<int>();
  s.layout.n_sender = l.at("n_sender").get<int>();
  s.layout.n_receiver = l.at("n_receiver").get<int>();
  s.layout.n_extended = l.at("n_extended").get<int>();
  s.tau = j.at("tau").get<double>();
  s.mode = parse_restore_mode(j.at("mode").get<std::string>());
  s.seed = j.at("seed").get<std::uint64_t>();
  s.start = j.at("start").get<int>();
  s.phi = j.at("phi").get<std::vector<double>>();
  s.residual = j.at("residual").get<double>();
  s.lambdas.clear();
  for (const auto& e : j.at("lambdas")) {
    const auto pos = e.at("pos").get<std::vector<std::size_t>>();
    if (pos.size() != 2) throw InvalidArgument("lambda position needs two indices");
    s.lambdas.push_back(
        {{pos[0], pos[1]}, Complex(e.at("re").get<double>(), e.at("im").get<double>())});
  }
  const auto& m = j.at("metrics");
  s.metrics.n_r = m.at("n_r").get<double>();
  const auto frac = m.at("n_r_fraction").get<std::vector<int>>();
  if (frac.size() != 2) throw InvalidArgument("n_r_fraction needs two integers");
  s.metrics.nr_numerator = frac[0];
  s.metrics.nr_denominator = frac[1];
  s.metrics.lambda_min.reset();
  s.metrics.lambda_avr.reset();
  if (!m.at("Lambda").is_null()) s.metrics.lambda_min = m.at("Lambda").get<double>();
  if (!m.at("Lambda_avr").is_null()) s.metrics.lambda_avr = m.at("Lambda_avr").get<double>();
}

}  // namespace xyrestore
