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

#include <vector>

#include "xyrestore/graded_basis.hpp"
#include "xyrestore/linalg.hpp"

namespace xyrestore {

/**
 * Multiple-quantum coherence matrices of a density matrix. Entry (i, j)
 * belongs to order exc(j) - exc(i), so positive orders sit above the
 * diagonal blocks in graded order.
 */
class CoherenceDecomposition {
 public:
  CoherenceDecomposition(int n_spins, std::vector<CMatrix> orders);

  int n_spins() const { return n_spins_; }
  /// rho^(n) for n in [-N, N].
  const CMatrix& order(int n) const;
  /// Sum of all order matrices; reproduces the decomposed matrix exactly.
  CMatrix sum() const;
  /// Orders whose max-norm exceeds tol, ascending.
  std::vector<int> populated_orders(double tol = 0.0) const;

 private:
  int n_spins_;
  std::vector<CMatrix> orders_;
};

/// Throws DimensionError unless rho is 2^N x 2^N for the basis.
CoherenceDecomposition decompose(const CMatrix& rho, const GradedBasis& basis);

struct ParityReport {
  std::vector<int> source_orders;
  std::vector<int> evolved_orders;
  /// Largest max-norm of an evolved order whose parity is absent from the source.
  double foreign_parity_leak = 0.0;
  bool parity_preserved = true;
};

/**
 * Evolves rho0 -> W rho0 W^dagger and records which coherence orders are
 * populated before and after. Orders count as populated above `tol`.
 * Throws ParityError when W couples sectors of different parity.
 */
ParityReport parity_mixing_check(
    const CMatrix& rho0, const CMatrix& w, const GradedBasis& basis,
    double tol = 1e-12);

}  // namespace xyrestore
