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

#include "xyrestore/hamiltonian.hpp"

#include <cmath>
#include <string>

#include "xyrestore/errors.hpp"

namespace xyrestore {

void ChainConfig::validate() const {
  if (n_spins < 2) {
    throw InvalidArgument(
        "chain needs at least 2 spins, got " + std::to_string(n_spins));
  }
  if (n_spins > kMaxSpins) {
    throw CapacityError("chain of " + std::to_string(n_spins) + " spins too large");
  }
  if (coupling == 0.0 || !std::isfinite(coupling)) {
    throw InvalidArgument("coupling must be finite and nonzero");
  }
}

CMatrix build_xy_hamiltonian(const ChainConfig& cfg, const GradedBasis& basis) {
  cfg.validate();
  if (basis.n_spins() != cfg.n_spins) {
    throw DimensionError(
        "basis has " + std::to_string(basis.n_spins()) + " spins, chain has " +
        std::to_string(cfg.n_spins));
  }
  const int n = cfg.n_spins;
  const double element = cfg.coupling / 2.0;
  CMatrix h = CMatrix::Zero(basis.dim(), basis.dim());
  for (std::size_t col = 0; col < basis.dim(); ++col) {
    const std::uint32_t mask = basis.mask(col);
    // Sites i and i+1 (1-based) live at bits n-i and n-i-1.
    for (int site = 1; site < n; ++site) {
      const std::uint32_t pair = 0b11u << (n - site - 1);
      const std::uint32_t bits = mask & pair;
      if (bits == 0 || bits == pair) {
        h(basis.index(mask ^ pair), col) = element;
      }
    }
  }
  return h;
}

CMatrix total_z_projection(const GradedBasis& basis) {
  CMatrix iz = CMatrix::Zero(basis.dim(), basis.dim());
  for (std::size_t g = 0; g < basis.dim(); ++g) {
    // I_z|0> = +1/2, I_z|1> = -1/2 per site.
    iz(g, g) = 0.5 * (basis.n_spins() - 2 * basis.excitation(g));
  }
  return iz;
}

}  // namespace xyrestore
