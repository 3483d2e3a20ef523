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

#include "xyrestore/coherence.hpp"

#include <algorithm>
#include <string>

#include "xyrestore/errors.hpp"

namespace xyrestore {

CoherenceDecomposition::CoherenceDecomposition(
    int n_spins, std::vector<CMatrix> orders)
    : n_spins_(n_spins), orders_(std::move(orders)) {
  if (orders_.size() != static_cast<std::size_t>(2 * n_spins + 1)) {
    throw DimensionError("coherence decomposition needs 2N+1 order matrices");
  }
}

const CMatrix& CoherenceDecomposition::order(int n) const {
  if (n < -n_spins_ || n > n_spins_) {
    throw InvalidArgument("coherence order " + std::to_string(n) + " out of range");
  }
  return orders_[n + n_spins_];
}

CMatrix CoherenceDecomposition::sum() const {
  CMatrix total = CMatrix::Zero(orders_.front().rows(), orders_.front().cols());
  for (const auto& m : orders_) total += m;
  return total;
}

std::vector<int> CoherenceDecomposition::populated_orders(double tol) const {
  std::vector<int> out;
  for (int n = -n_spins_; n <= n_spins_; ++n) {
    if (max_norm(order(n)) > tol) out.push_back(n);
  }
  return out;
}

CoherenceDecomposition decompose(const CMatrix& rho, const GradedBasis& basis) {
  const auto dim = static_cast<Eigen::Index>(basis.dim());
  if (rho.rows() != dim || rho.cols() != dim) {
    throw DimensionError(
        "decompose: matrix is " + std::to_string(rho.rows()) + "x" +
        std::to_string(rho.cols()) + ", basis has dimension " +
        std::to_string(dim));
  }
  const int n = basis.n_spins();
  std::vector<CMatrix> orders(2 * n + 1, CMatrix::Zero(dim, dim));
  for (Eigen::Index j = 0; j < dim; ++j) {
    const int ket = basis.excitation(j);
    for (Eigen::Index i = 0; i < dim; ++i) {
      orders[ket - basis.excitation(i) + n](i, j) = rho(i, j);
    }
  }
  return CoherenceDecomposition(n, std::move(orders));
}

ParityReport parity_mixing_check(
    const CMatrix& rho0, const CMatrix& w, const GradedBasis& basis,
    double tol) {
  require_parity_structure(w, basis, tol);
  const auto before = decompose(rho0, basis);
  const auto after = decompose(w * rho0 * w.adjoint(), basis);

  ParityReport report;
  report.source_orders = before.populated_orders(tol);
  report.evolved_orders = after.populated_orders(tol);
  bool has_even = false;
  bool has_odd = false;
  for (int n : report.source_orders) (n % 2 == 0 ? has_even : has_odd) = true;
  for (int n = -basis.n_spins(); n <= basis.n_spins(); ++n) {
    const bool allowed = (n % 2 == 0) ? has_even : has_odd;
    if (!allowed) {
      report.foreign_parity_leak =
          std::max(report.foreign_parity_leak, max_norm(after.order(n)));
    }
  }
  report.parity_preserved = report.foreign_parity_leak <= tol;
  return report;
}

}  // namespace xyrestore
