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

#include "xyrestore/registration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "xyrestore/errors.hpp"
#include "xyrestore/parallel.hpp"
#include "xyrestore/quadrature.hpp"

namespace xyrestore {

StateMeasure StateMeasure::two_qubit() {
  StateMeasure m;
  m.family_ = Family::two_qubit;
  m.angles_ = {{0.0, 2 * std::numbers::pi, 0}, {0.0, std::numbers::pi, 1},
               {0.0, std::numbers::pi, 2}};
  m.n_phases_ = 3;
  m.phase_labels_ = {0, 1, 2, 3};
  return m;
}

StateMeasure StateMeasure::two_qubit_even() {
  StateMeasure m;
  m.family_ = Family::two_qubit_even;
  m.angles_ = {{0.0, std::numbers::pi, 1}};
  m.n_phases_ = 1;
  m.phase_labels_ = {0, 0, 0, 1};
  return m;
}

StateMeasure StateMeasure::bloch() {
  StateMeasure m;
  m.family_ = Family::bloch;
  m.angles_ = {{0.0, std::numbers::pi, 1}};
  m.n_phases_ = 1;
  m.phase_labels_ = {0, 1};
  return m;
}

std::string StateMeasure::name() const {
  switch (family_) {
    case Family::two_qubit:
      return "two_qubit";
    case Family::two_qubit_even:
      return "two_qubit_even";
    case Family::bloch:
      return "bloch";
  }
  return "unknown";
}

RVector StateMeasure::magnitudes(std::span<const double> a) const {
  if (a.size() != angles_.size()) {
    throw DimensionError("measure " + name() + " expects " +
                         std::to_string(angles_.size()) + " angles");
  }
  RVector m(dim());
  switch (family_) {
    case Family::two_qubit: {
      const double s0 = std::sin(a[0] / 2), c0 = std::cos(a[0] / 2);
      const double s1 = std::sin(a[1] / 2), c1 = std::cos(a[1] / 2);
      const double s2 = std::sin(a[2] / 2), c2 = std::cos(a[2] / 2);
      m << s0 * s1 * s2, c0 * s1 * s2, c1 * s2, c2;
      break;
    }
    case Family::two_qubit_even:
      m << std::sin(a[0] / 2), 0.0, 0.0, std::cos(a[0] / 2);
      break;
    case Family::bloch:
      m << std::sin(a[0] / 2), std::cos(a[0] / 2);
      break;
  }
  return m;
}

CVector StateMeasure::state(
    std::span<const double> angles, std::span<const double> phases) const {
  if (phases.size() != n_phases_) {
    throw DimensionError("measure " + name() + " expects " +
                         std::to_string(n_phases_) + " phases");
  }
  const RVector m = magnitudes(angles);
  CVector psi(dim());
  for (std::size_t k = 0; k < dim(); ++k) {
    const int label = phase_labels_[k];
    const double chi = label == 0 ? 0.0 : phases[label - 1];
    psi[k] = Complex(m[k] * std::cos(chi), m[k] * std::sin(chi));
  }
  return psi;
}

namespace {

/// Tensor-product rule over the angle axes, weights including sin^power.
struct AngleGrid {
  std::vector<std::vector<double>> points;
  std::vector<double> weights;
};

AngleGrid angle_grid(const std::vector<AngleAxis>& axes, int nodes) {
  std::vector<QuadratureRule> rules;
  for (const auto& ax : axes) {
    QuadratureRule r = gauss_legendre(nodes, ax.lo, ax.hi);
    for (std::size_t k = 0; k < r.nodes.size(); ++k) {
      r.weights[k] *= std::pow(std::sin(r.nodes[k]), ax.sin_power);
    }
    rules.push_back(std::move(r));
  }
  AngleGrid grid;
  std::vector<std::size_t> idx(axes.size(), 0);
  while (true) {
    std::vector<double> p(axes.size());
    double w = 1.0;
    for (std::size_t d = 0; d < axes.size(); ++d) {
      p[d] = rules[d].nodes[idx[d]];
      w *= rules[d].weights[idx[d]];
    }
    grid.points.push_back(std::move(p));
    grid.weights.push_back(w);
    std::size_t d = 0;
    while (d < axes.size() && ++idx[d] == rules[d].nodes.size()) idx[d++] = 0;
    if (d == axes.size()) break;
  }
  return grid;
}

}  // namespace

double StateMeasure::volume(int nodes) const {
  const AngleGrid grid = angle_grid(angles_, nodes);
  double total = 0.0;
  for (double w : grid.weights) total += w;
  return total * std::pow(2 * std::numbers::pi, static_cast<double>(n_phases_));
}

FourthMoments::FourthMoments(const StateMeasure& measure, int nodes)
    : dim_(measure.dim()), data_(dim_ * dim_ * dim_ * dim_, 0.0) {
  const AngleGrid grid = angle_grid(measure.angles(), nodes);
  double norm = 0.0;
  for (std::size_t g = 0; g < grid.weights.size(); ++g) {
    const RVector m = measure.magnitudes(grid.points[g]);
    const double w = grid.weights[g];
    norm += w;
    std::size_t k = 0;
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = 0; j < dim_; ++j) {
        for (std::size_t a = 0; a < dim_; ++a) {
          const double partial = w * m[i] * m[j] * m[a];
          for (std::size_t b = 0; b < dim_; ++b) data_[k++] += partial * m[b];
        }
      }
    }
  }
  // The phase average of e^{i(-chi_i + chi_j + chi_a - chi_b)} is 1 when
  // every phase appears equally often with each sign, otherwise 0.
  const auto& labels = measure.phase_labels();
  std::size_t k = 0;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      for (std::size_t a = 0; a < dim_; ++a) {
        for (std::size_t b = 0; b < dim_; ++b, ++k) {
          bool balanced = true;
          for (std::size_t label = 1; label <= measure.n_phases(); ++label) {
            const int l = static_cast<int>(label);
            const int plus = (labels[j] == l) + (labels[a] == l);
            const int minus = (labels[i] == l) + (labels[b] == l);
            if (plus != minus) balanced = false;
          }
          data_[k] = balanced ? data_[k] / norm : 0.0;
        }
      }
    }
  }
}

double averaged_fidelity(const LambdaTensor& lambda, const FourthMoments& moments) {
  if (lambda.receiver_dim() != moments.dim() || lambda.sender_dim() != moments.dim()) {
    throw DimensionError("averaged_fidelity: measure does not match the receiver");
  }
  const std::size_t d = moments.dim();
  double f = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) {
          const double m = moments(i, j, a, b);
          if (m != 0.0) f += lambda(i, j, a, b).real() * m;
        }
      }
    }
  }
  return f;
}

FidelityEvaluator::FidelityEvaluator(
    CommLayout layout, Spectrum spectrum, const StateMeasure& measure, int nodes)
    : layout_(layout), spectrum_(std::move(spectrum)), moments_(measure, nodes) {
  layout_.validate();
  if (layout_.n_sender != measure.n_qubits()) {
    throw DimensionError("fidelity measure does not match the sender size");
  }
}

double FidelityEvaluator::operator()(double tau) const {
  return averaged_fidelity(TransferChannel(layout_, spectrum_, tau).lambda(), moments_);
}

namespace {

/// Maximiser of a unimodal f on [lo, hi] to interval width tol.
std::pair<double, double> golden_section_max(
    const FidelityEvaluator& f, double lo, double hi, double tol) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = f(x1);
    }
  }
  return f1 >= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

}  // namespace

FidelityScan scan_for_tau0(
    const FidelityEvaluator& fidelity, double horizon, double step, double tol) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw InvalidArgument("scan_for_tau0: horizon must be positive");
  }
  if (!(step > 0.0) || step > horizon) {
    throw InvalidArgument("scan_for_tau0: step must be in (0, horizon]");
  }
  if (!(tol > 0.0)) throw InvalidArgument("scan_for_tau0: tol must be positive");

  const auto n = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
  FidelityScan scan;
  scan.horizon = horizon;
  scan.step = step;
  scan.grid.resize(n + 1);
  parallel_for(n + 1, [&](std::size_t k) {
    const double tau = std::min(static_cast<double>(k) * step, horizon);
    scan.grid[k] = {tau, fidelity(tau)};
  });

  std::size_t best = 0;
  for (std::size_t k = 1; k < scan.grid.size(); ++k) {
    if (scan.grid[k].second > scan.grid[best].second) best = k;
  }
  scan.boundary = best == 0 || best == n;
  const double lo = scan.grid[best == 0 ? 0 : best - 1].first;
  const double hi = scan.grid[best == n ? n : best + 1].first;
  const auto [tau, f] = golden_section_max(fidelity, lo, hi, tol);
  if (f > scan.grid[best].second) {
    scan.tau0 = tau;
    scan.f0 = f;
  } else {
    scan.tau0 = scan.grid[best].first;
    scan.f0 = scan.grid[best].second;
  }
  return scan;
}

}  // namespace xyrestore
