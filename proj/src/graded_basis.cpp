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

#include "xyrestore/graded_basis.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "xyrestore/errors.hpp"

namespace xyrestore {

GradedBasis build_graded_basis(int n_spins) {
  if (n_spins < 1) {
    throw InvalidArgument("graded basis needs at least one spin");
  }
  if (n_spins > kMaxSpins) {
    throw CapacityError(
        "graded basis for " + std::to_string(n_spins) +
        " spins exceeds the limit of " + std::to_string(kMaxSpins));
  }
  GradedBasis b;
  b.n_spins_ = n_spins;
  const std::size_t dim = std::size_t{1} << n_spins;
  b.order_.resize(dim);
  std::iota(b.order_.begin(), b.order_.end(), 0u);
  std::stable_sort(
      b.order_.begin(), b.order_.end(), [](std::uint32_t x, std::uint32_t y) {
        return popcount(x) < popcount(y);
      });
  b.inverse_.resize(dim);
  for (std::size_t g = 0; g < dim; ++g) b.inverse_[b.order_[g]] = g;

  b.block_offsets_.assign(n_spins + 2, 0);
  for (std::uint32_t mask : b.order_) ++b.block_offsets_[popcount(mask) + 1];
  std::partial_sum(
      b.block_offsets_.begin(), b.block_offsets_.end(),
      b.block_offsets_.begin());
  return b;
}

CMatrix GradedBasis::to_graded(const CMatrix& computational) const {
  if (computational.rows() != static_cast<Eigen::Index>(dim()) ||
      computational.cols() != static_cast<Eigen::Index>(dim())) {
    throw DimensionError("to_graded: matrix does not match the basis");
  }
  CMatrix out(dim(), dim());
  for (std::size_t c = 0; c < dim(); ++c) {
    for (std::size_t r = 0; r < dim(); ++r) {
      out(r, c) = computational(order_[r], order_[c]);
    }
  }
  return out;
}

CMatrix GradedBasis::to_computational(const CMatrix& graded) const {
  if (graded.rows() != static_cast<Eigen::Index>(dim()) ||
      graded.cols() != static_cast<Eigen::Index>(dim())) {
    throw DimensionError("to_computational: matrix does not match the basis");
  }
  CMatrix out(dim(), dim());
  for (std::size_t c = 0; c < dim(); ++c) {
    for (std::size_t r = 0; r < dim(); ++r) {
      out(order_[r], order_[c]) = graded(r, c);
    }
  }
  return out;
}

double block_max_norm(const CMatrix& m, const GradedBasis& basis, int n, int k) {
  const auto rows = static_cast<Eigen::Index>(basis.block_size(n));
  const auto cols = static_cast<Eigen::Index>(basis.block_size(k));
  return max_norm(m.block(
      static_cast<Eigen::Index>(basis.block_offset(n)),
      static_cast<Eigen::Index>(basis.block_offset(k)), rows, cols));
}

double odd_parity_leak(const CMatrix& m, const GradedBasis& basis) {
  double leak = 0.0;
  for (int n = 0; n <= basis.n_spins(); ++n) {
    for (int k = 0; k <= basis.n_spins(); ++k) {
      if ((n - k) % 2 != 0) {
        leak = std::max(leak, block_max_norm(m, basis, n, k));
      }
    }
  }
  return leak;
}

void require_parity_structure(
    const CMatrix& m, const GradedBasis& basis, double tol) {
  if (m.rows() != static_cast<Eigen::Index>(basis.dim()) ||
      m.cols() != static_cast<Eigen::Index>(basis.dim())) {
    throw DimensionError("parity check: matrix does not match the basis");
  }
  for (int n = 0; n <= basis.n_spins(); ++n) {
    for (int k = 0; k <= basis.n_spins(); ++k) {
      if ((n - k) % 2 == 0) continue;
      const double norm = block_max_norm(m, basis, n, k);
      if (norm > tol) throw ParityError(n, k, norm);
    }
  }
}

}  // namespace xyrestore
