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

#include <cstddef>
#include <cstdint>
#include <vector>

#include "xyrestore/linalg.hpp"

namespace xyrestore {

/// Largest chain handled by the dense representation.
inline constexpr int kMaxSpins = 20;

/**
 * Computational states of an n-spin register ordered by excitation number.
 *
 * Bit convention: site 1 is the most significant bit of a mask and a set bit
 * is the excited spin |1>. States are grouped by popcount (ascending); within
 * an excitation block they appear in ascending mask order, so for two spins
 * the graded order coincides with |00>,|01>,|10>,|11>.
 */
class GradedBasis {
 public:
  int n_spins() const { return n_spins_; }
  std::size_t dim() const { return order_.size(); }

  /// Graded index -> computational mask.
  std::uint32_t mask(std::size_t graded) const { return order_[graded]; }
  /// Computational mask -> graded index.
  std::size_t index(std::uint32_t mask) const { return inverse_[mask]; }
  int excitation(std::size_t graded) const { return popcount(order_[graded]); }

  std::size_t block_offset(int n) const { return block_offsets_[n]; }
  std::size_t block_size(int n) const {
    return block_offsets_[n + 1] - block_offsets_[n];
  }

  const std::vector<std::uint32_t>& order() const { return order_; }
  const std::vector<std::size_t>& inverse() const { return inverse_; }
  /// n_spins + 2 entries; block n spans [offsets[n], offsets[n+1]).
  const std::vector<std::size_t>& block_offsets() const {
    return block_offsets_;
  }

  /// Re-index a matrix from computational (mask) order to graded order.
  CMatrix to_graded(const CMatrix& computational) const;
  /// Re-index a matrix from graded order to computational (mask) order.
  CMatrix to_computational(const CMatrix& graded) const;

  friend GradedBasis build_graded_basis(int n_spins);

 private:
  int n_spins_ = 0;
  std::vector<std::uint32_t> order_;
  std::vector<std::size_t> inverse_;
  std::vector<std::size_t> block_offsets_;
};

/// Throws CapacityError for n_spins > kMaxSpins, InvalidArgument for n_spins < 1.
GradedBasis build_graded_basis(int n_spins);

/// Max-norm of block (n, m) of a matrix expressed in graded order.
double block_max_norm(const CMatrix& m, const GradedBasis& basis, int n, int k);

/**
 * Largest max-norm over the blocks (n, m) with n - m odd. Zero for matrices
 * that only couple sectors of equal excitation parity.
 */
double odd_parity_leak(const CMatrix& m, const GradedBasis& basis);

/// Throws ParityError naming the first odd block whose max-norm exceeds tol.
void require_parity_structure(
    const CMatrix& m, const GradedBasis& basis, double tol);

}  // namespace xyrestore
