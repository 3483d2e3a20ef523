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

#include "xyrestore/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <sstream>

#include "xyrestore/errors.hpp"

namespace xyrestore {

ParityError::ParityError(int row_block, int col_block, double norm)
    : Error([&] {
        std::ostringstream os;
        os << "parity structure violated in block (" << row_block << ","
           << col_block << "), max-norm " << norm;
        return os.str();
      }()),
      row_block_(row_block),
      col_block_(col_block) {}

NoSolutionError::NoSolutionError(int attempts, double best_residual)
    : Error([&] {
        std::ostringstream os;
        os << "no restoring solution accepted after " << attempts
           << " starts; best residual " << best_residual;
        return os.str();
      }()),
      best_residual_(best_residual) {}

double max_norm(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const CMatrix& m) {
  return max_norm(m - m.adjoint());
}

double unitarity_defect(const CMatrix& m) {
  return max_norm(m.adjoint() * m - CMatrix::Identity(m.cols(), m.cols()));
}

bool is_hermitian(const CMatrix& m, double tol) {
  return m.rows() == m.cols() && hermiticity_defect(m) <= tol;
}

bool is_unitary(const CMatrix& m, double tol) {
  return m.rows() == m.cols() && unitarity_defect(m) <= tol;
}

void require_hermitian(const CMatrix& m, const char* what, double tol) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(what) + ": matrix is not square");
  }
  const double d = hermiticity_defect(m);
  if (d > tol) {
    std::ostringstream os;
    os << what << ": not Hermitian (defect " << d << ")";
    throw MatrixPropertyError(os.str());
  }
}

void require_unitary(const CMatrix& m, const char* what, double tol) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(what) + ": matrix is not square");
  }
  const double d = unitarity_defect(m);
  if (d > tol) {
    std::ostringstream os;
    os << what << ": not unitary (defect " << d << ")";
    throw MatrixPropertyError(os.str());
  }
}

void require_density(
    const CMatrix& rho, const char* what, double hermitian_tol,
    double trace_tol, double psd_tol) {
  require_hermitian(rho, what, hermitian_tol);
  const Complex tr = rho.trace();
  if (std::abs(tr - 1.0) > trace_tol) {
    std::ostringstream os;
    os << what << ": trace " << tr << " differs from 1";
    throw MatrixPropertyError(os.str());
  }
  // Symmetrize before the eigen-solve; the Hermiticity check above bounds
  // the discarded part.
  const CMatrix h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -psd_tol) {
    std::ostringstream os;
    os << what << ": negative eigenvalue " << min_eig;
    throw MatrixPropertyError(os.str());
  }
}

}  // namespace xyrestore
