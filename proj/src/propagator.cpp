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

#include "xyrestore/propagator.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "xyrestore/errors.hpp"

namespace xyrestore {

Spectrum diagonalize(const CMatrix& h) {
  require_hermitian(h, "diagonalize");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success) {
    throw Error("diagonalize: eigen-solver did not converge");
  }
  return Spectrum{es.eigenvalues(), es.eigenvectors()};
}

namespace {

void require_finite(double tau) {
  if (!std::isfinite(tau)) throw InvalidArgument("evolve: tau must be finite");
}

CVector phases(const Spectrum& spectrum, double tau) {
  CVector p(spectrum.dim());
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    p[k] = std::polar(1.0, -spectrum.energies[k] * tau);
  }
  return p;
}

}  // namespace

Propagator evolve(const Spectrum& spectrum, double tau) {
  require_finite(tau);
  const CVector p = phases(spectrum, tau);
  CMatrix v = spectrum.vectors * p.asDiagonal() * spectrum.vectors.adjoint();
  return Propagator{tau, std::move(v)};
}

CMatrix evolve_columns(
    const Spectrum& spectrum, double tau,
    std::span<const Eigen::Index> columns) {
  require_finite(tau);
  const CVector p = phases(spectrum, tau);
  CMatrix rows(spectrum.dim(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    rows.col(static_cast<Eigen::Index>(c)) =
        p.cwiseProduct(spectrum.vectors.row(columns[c]).adjoint());
  }
  return spectrum.vectors * rows;
}

}  // namespace xyrestore
