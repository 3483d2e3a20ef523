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
#include <functional>

namespace xyrestore {

using RMatrix = Eigen::MatrixXd;
using ResidualFunction = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using JacobianFunction = std::function<RMatrix(const Eigen::VectorXd&)>;

struct SolverOptions {
  /// Accept when the Euclidean norm of the residual drops to this value.
  double tol = 1e-8;
  int max_iterations = 400;
  /// Central-difference step for the Jacobian.
  double fd_step = 1e-6;
};

struct LeastSquaresResult {
  Eigen::VectorXd x;
  double residual_norm = 0.0;
  int iterations = 0;
  /// Calls of f, including the ones made by a finite-difference Jacobian.
  int evaluations = 0;
  bool converged = false;
};

/// J_ij = (f_i(x + h e_j) - f_i(x - h e_j)) / 2h.
RMatrix central_difference_jacobian(
    const ResidualFunction& f, const Eigen::VectorXd& x, double step,
    int* evaluations = nullptr);

/**
 * Damped Gauss-Newton (Levenberg-Marquardt) for min |f(x)|^2. Works for any
 * shape of the Jacobian: the step -(J^T J + mu I)^{-1} J^T f is computed in
 * the equivalent form -J^T (J J^T + mu I)^{-1} f when there are fewer
 * residuals than unknowns. Damping follows Nielsen's gain-ratio update.
 */
LeastSquaresResult levenberg_marquardt(
    const ResidualFunction& f, Eigen::VectorXd x0, const SolverOptions& options);

/// Same, with a caller-supplied Jacobian of f.
LeastSquaresResult levenberg_marquardt(
    const ResidualFunction& f, const JacobianFunction& jacobian, Eigen::VectorXd x0,
    const SolverOptions& options);

}  // namespace xyrestore
