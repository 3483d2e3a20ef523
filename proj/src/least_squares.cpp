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

#include "xyrestore/least_squares.hpp"

#include <algorithm>
#include <cmath>

#include "xyrestore/errors.hpp"

namespace xyrestore {

RMatrix central_difference_jacobian(
    const ResidualFunction& f, const Eigen::VectorXd& x, double step,
    int* evaluations) {
  Eigen::VectorXd probe = x;
  RMatrix jac;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    probe[j] = x[j] + step;
    const Eigen::VectorXd plus = f(probe);
    probe[j] = x[j] - step;
    const Eigen::VectorXd minus = f(probe);
    probe[j] = x[j];
    if (j == 0) jac.resize(plus.size(), x.size());
    jac.col(j) = (plus - minus) / (2.0 * step);
  }
  if (evaluations) *evaluations += static_cast<int>(2 * x.size());
  return jac;
}

namespace {

Eigen::VectorXd damped_step(const RMatrix& jac, const Eigen::VectorXd& r, double mu) {
  if (jac.rows() < jac.cols()) {
    RMatrix a = jac * jac.transpose();
    a.diagonal().array() += mu;
    return -jac.transpose() * a.llt().solve(r);
  }
  RMatrix a = jac.transpose() * jac;
  a.diagonal().array() += mu;
  return -a.llt().solve(jac.transpose() * r);
}

}  // namespace

LeastSquaresResult levenberg_marquardt(
    const ResidualFunction& f, Eigen::VectorXd x0, const SolverOptions& options) {
  int jacobian_evaluations = 0;
  const JacobianFunction jacobian = [&](const Eigen::VectorXd& x) {
    return central_difference_jacobian(f, x, options.fd_step, &jacobian_evaluations);
  };
  LeastSquaresResult out = levenberg_marquardt(f, jacobian, std::move(x0), options);
  out.evaluations += jacobian_evaluations;
  return out;
}

LeastSquaresResult levenberg_marquardt(
    const ResidualFunction& f, const JacobianFunction& jacobian, Eigen::VectorXd x0,
    const SolverOptions& options) {
  if (!(options.tol > 0.0) || !(options.fd_step > 0.0) || options.max_iterations < 0) {
    throw InvalidArgument("levenberg_marquardt: invalid solver options");
  }
  LeastSquaresResult out;
  out.x = std::move(x0);
  Eigen::VectorXd r = f(out.x);
  out.evaluations = 1;
  double cost = r.squaredNorm();
  if (r.size() == 0) {
    out.converged = true;
    return out;
  }

  double mu = -1.0;
  double nu = 2.0;
  RMatrix jac;
  bool refresh = true;
  while (std::sqrt(cost) > options.tol && out.iterations < options.max_iterations) {
    if (refresh) {
      jac = jacobian(out.x);
      refresh = false;
    }
    const Eigen::VectorXd g = jac.transpose() * r;
    if (mu < 0.0) {
      const double diag = jac.colwise().squaredNorm().maxCoeff();
      mu = 1e-3 * std::max(diag, 1e-12);
    }
    ++out.iterations;
    const Eigen::VectorXd step = damped_step(jac, r, mu);
    if (!step.allFinite()) break;
    if (step.norm() <= 1e-15 * (out.x.norm() + 1e-15)) break;

    const Eigen::VectorXd x_new = out.x + step;
    const Eigen::VectorXd r_new = f(x_new);
    ++out.evaluations;
    const double cost_new = r_new.squaredNorm();
    // Decrease of |r + J step|^2 predicted by the linearisation.
    const double predicted = step.dot(mu * step - g);
    const double gain = predicted > 0.0 ? (cost - cost_new) / predicted : -1.0;
    if (gain > 0.0 && std::isfinite(cost_new)) {
      out.x = x_new;
      r = r_new;
      cost = cost_new;
      mu *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * gain - 1.0, 3));
      nu = 2.0;
      refresh = true;
    } else {
      mu *= nu;
      nu *= 2.0;
      if (mu > 1e16) break;
    }
  }
  out.residual_norm = std::sqrt(cost);
  out.converged = out.residual_norm <= options.tol;
  return out;
}

}  // namespace xyrestore
