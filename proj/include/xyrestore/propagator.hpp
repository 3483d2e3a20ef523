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

#include <span>

#include "xyrestore/linalg.hpp"

namespace xyrestore {

/// h = vectors * diag(energies) * vectors^dagger, energies ascending.
struct Spectrum {
  RVector energies;
  CMatrix vectors;

  Eigen::Index dim() const { return energies.size(); }
};

/// V(tau) = exp(-i H tau) in the basis of the Hamiltonian it came from.
struct Propagator {
  double tau = 0.0;
  CMatrix matrix;
};

/// Throws MatrixPropertyError if h is not Hermitian to 1e-12.
Spectrum diagonalize(const CMatrix& h);

/// Throws InvalidArgument for non-finite tau.
Propagator evolve(const Spectrum& spectrum, double tau);

/**
 * Selected columns of V(tau), i.e. V(tau) e_c for every c in `columns`.
 * Costs O(dim^2 * columns.size()) instead of a full matrix product.
 */
CMatrix evolve_columns(
    const Spectrum& spectrum, double tau, std::span<const Eigen::Index> columns);

}  // namespace xyrestore
