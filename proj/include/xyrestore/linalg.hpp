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

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

namespace xyrestore {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Tolerances used by the per-use matrix checks.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;

/// Largest absolute entry.
double max_norm(const CMatrix& m);

/// ‖M − M†‖_max.
double hermiticity_defect(const CMatrix& m);

/// ‖M†M − I‖_max.
double unitarity_defect(const CMatrix& m);

bool is_hermitian(const CMatrix& m, double tol = kHermitianTol);
bool is_unitary(const CMatrix& m, double tol = kUnitaryTol);

/**
 * Throws MatrixPropertyError unless `rho` is square, Hermitian within
 * `hermitian_tol`, has unit trace within `trace_tol` and no eigenvalue below
 * `-psd_tol`. `what` prefixes the error message.
 */
void require_density(
    const CMatrix& rho, const char* what, double hermitian_tol = kHermitianTol,
    double trace_tol = kTraceTol, double psd_tol = kPsdTol);

void require_hermitian(const CMatrix& m, const char* what, double tol = kHermitianTol);
void require_unitary(const CMatrix& m, const char* what, double tol = kUnitaryTol);

/// Number of set bits, i.e. the excitation number of a computational state.
inline int popcount(std::uint32_t mask) { return __builtin_popcount(mask); }

}  // namespace xyrestore
