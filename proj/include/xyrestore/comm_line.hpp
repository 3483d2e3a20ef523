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

#include "xyrestore/graded_basis.hpp"
#include "xyrestore/linalg.hpp"
#include "xyrestore/propagator.hpp"

namespace xyrestore {

/**
 * Partition of an N-site chain (sites 1..N) into sender S = [1, nS],
 * receiver R = [N-nR+1, N], extended receiver ER = [N-nER+1, N] and the
 * transmission line TL between S and R.
 */
struct CommLayout {
  int n_total = 6;
  int n_sender = 2;
  int n_receiver = 2;
  int n_extended = 4;

  /// Throws InvalidArgument when the partition is inconsistent.
  void validate() const;

  int n_line() const { return n_total - n_sender - n_receiver; }
  /// Sites of S and of TL outside ER.
  int n_outer() const { return n_total - n_extended; }

  std::size_t sender_dim() const { return std::size_t{1} << n_sender; }
  std::size_t receiver_dim() const { return std::size_t{1} << n_receiver; }
  std::size_t extended_dim() const { return std::size_t{1} << n_extended; }

  /// Full-chain mask of |sender_mask> on S with every other site in |0>.
  std::uint32_t embed_sender_mask(std::uint32_t sender_mask) const {
    return sender_mask << (n_total - n_sender);
  }
};

/**
 * lambda(i, j, a, b): coefficient of s_ab in r_ij, with (i, j) graded
 * receiver indices and (a, b) graded sender indices. Entries whose
 * coherence-order parities differ, (exc j - exc i) - (exc b - exc a) odd,
 * are zero by construction.
 */
class LambdaTensor {
 public:
  LambdaTensor(int n_receiver, int n_sender);

  int n_receiver() const { return n_receiver_; }
  int n_sender() const { return n_sender_; }
  std::size_t receiver_dim() const { return dr_; }
  std::size_t sender_dim() const { return ds_; }

  Complex operator()(std::size_t i, std::size_t j, std::size_t a, std::size_t b) const {
    return data_[flat(i, j, a, b)];
  }
  Complex& operator()(std::size_t i, std::size_t j, std::size_t a, std::size_t b) {
    return data_[flat(i, j, a, b)];
  }

  /**
   * Block-addressed access lambda^(nmkl)_{i j i~ j~}: receiver blocks n, m and
   * sender blocks k, l, with positions counted inside each block.
   */
  Complex block_entry(
      int n, int m, int k, int l, std::size_t i, std::size_t j,
      std::size_t i_tilde, std::size_t j_tilde) const;

  /// True when the entry is excluded by the order-parity rule.
  bool structurally_zero(std::size_t i, std::size_t j, std::size_t a, std::size_t b) const;

  /// r_ij = sum_ab lambda(i,j,a,b) s_ab.
  CMatrix contract(const CMatrix& s) const;

  /// max |this - other| over all entries.
  double max_difference(const LambdaTensor& other) const;

  double tau = 0.0;
  /// Parameters of the extended-receiver unitary; empty means none applied.
  std::vector<double> phi;

 private:
  std::size_t flat(std::size_t i, std::size_t j, std::size_t a, std::size_t b) const {
    return ((i * dr_ + j) * ds_ + a) * ds_ + b;
  }

  int n_receiver_;
  int n_sender_;
  std::size_t dr_;
  std::size_t ds_;
  std::vector<Complex> data_;
  GradedBasis receiver_basis_;
  GradedBasis sender_basis_;
};

/// rho(0) = s (x) |0..0><0..0| in full-chain graded order; s must be a density matrix.
CMatrix initial_state(const CMatrix& s, const CommLayout& layout);

/// Same embedding for an arbitrary sender operator, without density checks.
CMatrix embed_sender_operator(const CMatrix& op, const CommLayout& layout);

/// r = Tr_{S,TL} rho in receiver graded order.
CMatrix receiver_state(const CMatrix& rho, const CommLayout& layout);

/// I_{S, TL outside ER} (x) U in full-chain graded order; u is in ER graded order.
CMatrix embed_extended_unitary(const CMatrix& u, const CommLayout& layout);

/**
 * Lambda-tensor from the multi-index sum over sender and line indices of
 * W_{N_S N_TL N_R; I_S 0 0} conj(W_{N_S N_TL M_R; J_S 0 0}). `w` is the full
 * chain unitary in graded order; it must be unitary and parity-structured.
 */
LambdaTensor lambda_tensor_direct(const CMatrix& w, const CommLayout& layout);

/**
 * Lambda-tensor read off column by column: each sender matrix unit E_ab is
 * embedded, propagated as W rho W^dagger and traced down to the receiver.
 */
LambdaTensor lambda_tensor_oracle(const CMatrix& w, const CommLayout& layout);

/**
 * Receiver channel at a fixed registration time, specialised for repeated
 * evaluation under different extended-receiver unitaries. Only the sender
 * columns of V(tau) are kept.
 */
class TransferChannel {
 public:
  TransferChannel(const CommLayout& layout, const Spectrum& spectrum, double tau);

  const CommLayout& layout() const { return layout_; }
  double tau() const { return tau_; }

  /// Tensor for W = (I (x) U) V(tau); u in ER graded order.
  LambdaTensor lambda(const CMatrix& u) const;
  /// Tensor for W = V(tau).
  LambdaTensor lambda() const;

  /// Per sender graded index a: rows = outer masks, cols = ER graded index.
  const std::vector<CMatrix>& sender_columns() const { return sender_columns_; }
  /// Line part (ER sites outside R) of each ER graded index.
  const std::vector<std::uint32_t>& er_line_part() const { return er_line_part_; }
  /// Receiver graded index of each ER graded index.
  const std::vector<std::size_t>& er_receiver_index() const {
    return er_receiver_index_;
  }

 private:
  LambdaTensor contract_columns(const std::vector<CMatrix>& columns) const;

  CommLayout layout_;
  double tau_;
  std::vector<CMatrix> sender_columns_;
  std::vector<std::uint32_t> er_line_part_;
  std::vector<std::size_t> er_receiver_index_;
};

}  // namespace xyrestore
