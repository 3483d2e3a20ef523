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

#include "xyrestore/quadrature.hpp"

#include <algorithm>
#include <boost/math/special_functions/legendre.hpp>
#include <cmath>

#include "xyrestore/errors.hpp"

namespace xyrestore {

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw InvalidArgument("gauss_legendre: need at least one node");
  // Boost returns the non-negative roots of P_n.
  const std::vector<double> roots = boost::math::legendre_p_zeros<double>(n);
  std::vector<double> x;
  for (double r : roots) {
    x.push_back(r);
    if (r != 0.0) x.push_back(-r);
  }
  std::sort(x.begin(), x.end());
  QuadratureRule rule;
  const double half = (b - a) / 2;
  const double mid = (a + b) / 2;
  for (double r : x) {
    const double dp = boost::math::legendre_p_prime<double>(n, r);
    rule.nodes.push_back(mid + half * r);
    rule.weights.push_back(half * 2.0 / ((1.0 - r * r) * dp * dp));
  }
  return rule;
}

}  // namespace xyrestore
