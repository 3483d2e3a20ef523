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

// Reference implementations used only by the tests. None of them shares code
// with the library paths they check.

#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "xyrestore/graded_basis.hpp"
#include "xyrestore/linalg.hpp"

namespace xyrestore {
namespace oracle {

inline CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

inline CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Operator `op` on site `site` (1-based, site 1 leftmost) of an n-site chain.
inline CMatrix site_operator(const CMatrix& op, int site, int n) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (int k = 1; k <= n; ++k) {
    out = kron(out, k == site ? op : CMatrix::Identity(2, 2));
  }
  return out;
}

/// D/4 sum_i (X_i X_{i+1} - Y_i Y_{i+1}) in computational order. The
/// excited spin |1> is the second basis vector, so I+ = |1><0|.
inline CMatrix xy_hamiltonian_pauli(int n, double d) {
  const auto dim = Eigen::Index{1} << n;
  CMatrix h = CMatrix::Zero(dim, dim);
  for (int i = 1; i < n; ++i) {
    h += (d / 4.0) * (site_operator(pauli_x(), i, n) * site_operator(pauli_x(), i + 1, n) -
                      site_operator(pauli_y(), i, n) * site_operator(pauli_y(), i + 1, n));
  }
  return h;
}

/// exp(a) by scaling and squaring of a truncated Taylor series.
inline CMatrix expm_taylor(const CMatrix& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  double scaled = norm;
  while (scaled > 0.5) {
    scaled /= 2.0;
    ++squarings;
  }
  const CMatrix x = a / std::pow(2.0, squarings);
  CMatrix term = CMatrix::Identity(a.rows(), a.cols());
  CMatrix sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

inline CMatrix random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = Complex(g(rng), g(rng));
  }
  return m;
}

/// Random Hermitian matrix whose odd-parity blocks (graded order) are zero.
inline CMatrix random_parity_hermitian(const GradedBasis& basis, std::mt19937_64& rng) {
  const auto dim = static_cast<Eigen::Index>(basis.dim());
  CMatrix m = random_complex(dim, dim, rng);
  m = (m + m.adjoint()).eval() / 2.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      if ((basis.excitation(i) - basis.excitation(j)) % 2 != 0) m(i, j) = 0.0;
    }
  }
  return m;
}

/// exp(i G) for a random parity-structured Hermitian G.
inline CMatrix random_parity_unitary(const GradedBasis& basis, std::mt19937_64& rng) {
  const CMatrix g = random_parity_hermitian(basis, rng);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(g);
  const CVector phases = (Complex(0, 1) * es.eigenvalues().cast<Complex>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// Haar-like random pure state (normalized complex Gaussian vector).
inline CVector random_pure(Eigen::Index dim, std::mt19937_64& rng) {
  CVector v = random_complex(dim, 1, rng);
  return v / v.norm();
}

/// Random full-rank density matrix G G^dagger / tr.
inline CMatrix random_density(Eigen::Index dim, std::mt19937_64& rng) {
  const CMatrix g = random_complex(dim, dim, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return (rho + rho.adjoint()).eval() / 2.0;
}

/// Partial trace keeping the last `keep` sites of an n-site computational-order matrix.
inline CMatrix trace_keep_last(const CMatrix& rho, int n, int keep) {
  const int dk = 1 << keep;
  const int dt = 1 << (n - keep);
  CMatrix out = CMatrix::Zero(dk, dk);
  for (int i = 0; i < dk; ++i) {
    for (int j = 0; j < dk; ++j) {
      for (int t = 0; t < dt; ++t) out(i, j) += rho(t * dk + i, t * dk + j);
    }
  }
  return out;
}

/// Angles of the six-parameter sender family drawn with density
/// proportional to sin(phi1) sin^2(phi2): phi1 by inverse CDF, phi2 by
/// rejection from the uniform distribution.
inline std::array<double, 6> sample_weighted_params(std::mt19937_64& rng) {
  constexpr double pi = 3.14159265358979323846;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double phi0 = 2 * pi * u(rng);
  const double phi1 = std::acos(1.0 - 2.0 * u(rng));
  double phi2 = 0.0;
  do {
    phi2 = pi * u(rng);
  } while (u(rng) > std::sin(phi2) * std::sin(phi2));
  return {phi0, phi1, phi2, 2 * pi * u(rng), 2 * pi * u(rng), 2 * pi * u(rng)};
}

}  // namespace oracle
}  // namespace xyrestore
