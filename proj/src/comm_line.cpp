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

#include "xyrestore/comm_line.hpp"

#include <algorithm>
#include <string>

#include "xyrestore/errors.hpp"

namespace xyrestore {

void CommLayout::validate() const {
  if (n_total < 2 || n_total > kMaxSpins) {
    throw InvalidArgument("layout: chain length out of range");
  }
  if (n_sender < 1 || n_receiver < 1) {
    throw InvalidArgument("layout: sender and receiver need at least one site");
  }
  if (n_sender != n_receiver) {
    throw InvalidArgument("layout: sender and receiver must have equal size");
  }
  if (n_sender + n_receiver > n_total) {
    throw InvalidArgument("layout: sender and receiver overlap");
  }
  if (n_extended < n_receiver || n_extended > n_total - n_sender) {
    throw InvalidArgument(
        "layout: extended receiver must contain the receiver and stay clear "
        "of the sender");
  }
}

LambdaTensor::LambdaTensor(int n_receiver, int n_sender)
    : n_receiver_(n_receiver),
      n_sender_(n_sender),
      dr_(std::size_t{1} << n_receiver),
      ds_(std::size_t{1} << n_sender),
      data_(dr_ * dr_ * ds_ * ds_, Complex{0.0, 0.0}),
      receiver_basis_(build_graded_basis(n_receiver)),
      sender_basis_(build_graded_basis(n_sender)) {}

Complex LambdaTensor::block_entry(
    int n, int m, int k, int l, std::size_t i, std::size_t j,
    std::size_t i_tilde, std::size_t j_tilde) const {
  if (i >= receiver_basis_.block_size(n) || j >= receiver_basis_.block_size(m) ||
      i_tilde >= sender_basis_.block_size(k) ||
      j_tilde >= sender_basis_.block_size(l)) {
    throw InvalidArgument("lambda block index out of range");
  }
  return (*this)(
      receiver_basis_.block_offset(n) + i, receiver_basis_.block_offset(m) + j,
      sender_basis_.block_offset(k) + i_tilde,
      sender_basis_.block_offset(l) + j_tilde);
}

bool LambdaTensor::structurally_zero(
    std::size_t i, std::size_t j, std::size_t a, std::size_t b) const {
  const int receiver_order =
      receiver_basis_.excitation(j) - receiver_basis_.excitation(i);
  const int sender_order = sender_basis_.excitation(b) - sender_basis_.excitation(a);
  return (receiver_order - sender_order) % 2 != 0;
}

CMatrix LambdaTensor::contract(const CMatrix& s) const {
  if (s.rows() != static_cast<Eigen::Index>(ds_) ||
      s.cols() != static_cast<Eigen::Index>(ds_)) {
    throw DimensionError("contract: sender matrix has the wrong dimension");
  }
  CMatrix r = CMatrix::Zero(dr_, dr_);
  for (std::size_t i = 0; i < dr_; ++i) {
    for (std::size_t j = 0; j < dr_; ++j) {
      Complex acc{0.0, 0.0};
      for (std::size_t a = 0; a < ds_; ++a) {
        for (std::size_t b = 0; b < ds_; ++b) {
          acc += (*this)(i, j, a, b) * s(a, b);
        }
      }
      r(i, j) = acc;
    }
  }
  return r;
}

double LambdaTensor::max_difference(const LambdaTensor& other) const {
  if (other.data_.size() != data_.size()) {
    throw DimensionError("lambda tensors have different shapes");
  }
  double d = 0.0;
  for (std::size_t k = 0; k < data_.size(); ++k) {
    d = std::max(d, std::abs(data_[k] - other.data_[k]));
  }
  return d;
}

namespace {

void require_full_dim(const CMatrix& m, const CommLayout& layout, const char* what) {
  const auto dim = Eigen::Index{1} << layout.n_total;
  if (m.rows() != dim || m.cols() != dim) {
    throw DimensionError(
        std::string(what) + ": expected " + std::to_string(dim) + "x" +
        std::to_string(dim) + " matrix, got " + std::to_string(m.rows()) + "x" +
        std::to_string(m.cols()));
  }
}

void require_chain_unitary(
    const CMatrix& w, const CommLayout& layout, const GradedBasis& basis,
    const char* what) {
  require_full_dim(w, layout, what);
  require_unitary(w, what);
  require_parity_structure(w, basis, 1e-12);
}

}  // namespace

CMatrix embed_sender_operator(const CMatrix& op, const CommLayout& layout) {
  layout.validate();
  const auto ds = static_cast<Eigen::Index>(layout.sender_dim());
  if (op.rows() != ds || op.cols() != ds) {
    throw DimensionError("sender operator has the wrong dimension");
  }
  const GradedBasis full = build_graded_basis(layout.n_total);
  const GradedBasis sender = build_graded_basis(layout.n_sender);
  CMatrix rho = CMatrix::Zero(full.dim(), full.dim());
  for (Eigen::Index a = 0; a < ds; ++a) {
    const auto row = full.index(layout.embed_sender_mask(sender.mask(a)));
    for (Eigen::Index b = 0; b < ds; ++b) {
      const auto col = full.index(layout.embed_sender_mask(sender.mask(b)));
      rho(row, col) = op(a, b);
    }
  }
  return rho;
}

CMatrix initial_state(const CMatrix& s, const CommLayout& layout) {
  require_density(s, "initial_state: sender state");
  return embed_sender_operator(s, layout);
}

CMatrix receiver_state(const CMatrix& rho, const CommLayout& layout) {
  layout.validate();
  require_full_dim(rho, layout, "receiver_state");
  const GradedBasis full = build_graded_basis(layout.n_total);
  const GradedBasis receiver = build_graded_basis(layout.n_receiver);
  const CMatrix comp = full.to_computational(rho);
  const std::uint32_t dr = static_cast<std::uint32_t>(layout.receiver_dim());
  const std::uint32_t n_traced = 1u << (layout.n_total - layout.n_receiver);
  CMatrix r = CMatrix::Zero(dr, dr);
  for (std::uint32_t x = 0; x < n_traced; ++x) {
    const std::uint32_t base = x << layout.n_receiver;
    r += comp.block(base, base, dr, dr);
  }
  return receiver.to_graded(r);
}

CMatrix embed_extended_unitary(const CMatrix& u, const CommLayout& layout) {
  layout.validate();
  const auto de = static_cast<Eigen::Index>(layout.extended_dim());
  if (u.rows() != de || u.cols() != de) {
    throw DimensionError("extended-receiver unitary has the wrong dimension");
  }
  const GradedBasis full = build_graded_basis(layout.n_total);
  const GradedBasis er = build_graded_basis(layout.n_extended);
  const std::uint32_t n_outer = 1u << layout.n_outer();
  CMatrix w = CMatrix::Zero(full.dim(), full.dim());
  for (std::uint32_t x = 0; x < n_outer; ++x) {
    const std::uint32_t base = x << layout.n_extended;
    for (Eigen::Index p = 0; p < de; ++p) {
      const auto row = full.index(base | er.mask(p));
      for (Eigen::Index q = 0; q < de; ++q) {
        w(row, full.index(base | er.mask(q))) = u(p, q);
      }
    }
  }
  return w;
}

LambdaTensor lambda_tensor_direct(const CMatrix& w, const CommLayout& layout) {
  layout.validate();
  const GradedBasis full = build_graded_basis(layout.n_total);
  require_chain_unitary(w, layout, full, "lambda_tensor_direct");
  const GradedBasis sender = build_graded_basis(layout.n_sender);
  const GradedBasis receiver = build_graded_basis(layout.n_receiver);

  LambdaTensor lambda(layout.n_receiver, layout.n_sender);
  const std::uint32_t n_traced = 1u << (layout.n_total - layout.n_receiver);
  const std::size_t ds = sender.dim();
  const std::size_t dr = receiver.dim();

  for (std::size_t a = 0; a < ds; ++a) {
    const std::uint32_t i_s = sender.mask(a);
    const auto col_a = full.index(layout.embed_sender_mask(i_s));
    for (std::size_t b = 0; b < ds; ++b) {
      const std::uint32_t j_s = sender.mask(b);
      const auto col_b = full.index(layout.embed_sender_mask(j_s));
      for (std::size_t i = 0; i < dr; ++i) {
        const std::uint32_t n_r = receiver.mask(i);
        for (std::size_t j = 0; j < dr; ++j) {
          if (lambda.structurally_zero(i, j, a, b)) continue;
          const std::uint32_t m_r = receiver.mask(j);
          Complex acc{0.0, 0.0};
          // x packs the sender and line multi-indexes (N_S, N_TL).
          for (std::uint32_t x = 0; x < n_traced; ++x) {
            const int outer = popcount(x);
            if ((popcount(i_s) - outer - popcount(n_r)) % 2 != 0) continue;
            if ((popcount(j_s) - outer - popcount(m_r)) % 2 != 0) continue;
            const std::uint32_t base = x << layout.n_receiver;
            acc += w(full.index(base | n_r), col_a) *
                   std::conj(w(full.index(base | m_r), col_b));
          }
          lambda(i, j, a, b) = acc;
        }
      }
    }
  }
  return lambda;
}

LambdaTensor lambda_tensor_oracle(const CMatrix& w, const CommLayout& layout) {
  layout.validate();
  const GradedBasis full = build_graded_basis(layout.n_total);
  require_chain_unitary(w, layout, full, "lambda_tensor_oracle");

  LambdaTensor lambda(layout.n_receiver, layout.n_sender);
  const auto ds = static_cast<Eigen::Index>(layout.sender_dim());
  const auto dr = static_cast<std::size_t>(layout.receiver_dim());
  for (Eigen::Index a = 0; a < ds; ++a) {
    for (Eigen::Index b = 0; b < ds; ++b) {
      CMatrix unit = CMatrix::Zero(ds, ds);
      unit(a, b) = 1.0;
      const CMatrix rho = embed_sender_operator(unit, layout);
      const CMatrix r = receiver_state(w * rho * w.adjoint(), layout);
      for (std::size_t i = 0; i < dr; ++i) {
        for (std::size_t j = 0; j < dr; ++j) {
          lambda(i, j, a, b) = r(i, j);
        }
      }
    }
  }
  return lambda;
}

TransferChannel::TransferChannel(
    const CommLayout& layout, const Spectrum& spectrum, double tau)
    : layout_(layout), tau_(tau) {
  layout_.validate();
  const GradedBasis full = build_graded_basis(layout_.n_total);
  if (spectrum.dim() != static_cast<Eigen::Index>(full.dim())) {
    throw DimensionError("TransferChannel: spectrum does not match the chain");
  }
  const GradedBasis sender = build_graded_basis(layout_.n_sender);
  const GradedBasis er = build_graded_basis(layout_.n_extended);
  const GradedBasis receiver = build_graded_basis(layout_.n_receiver);

  std::vector<Eigen::Index> cols;
  for (std::size_t a = 0; a < sender.dim(); ++a) {
    cols.push_back(static_cast<Eigen::Index>(
        full.index(layout_.embed_sender_mask(sender.mask(a)))));
  }
  const CMatrix v_cols = evolve_columns(spectrum, tau, cols);

  const auto n_outer = Eigen::Index{1} << layout_.n_outer();
  const auto de = static_cast<Eigen::Index>(er.dim());
  sender_columns_.reserve(cols.size());
  for (std::size_t a = 0; a < cols.size(); ++a) {
    CMatrix m(n_outer, de);
    for (Eigen::Index x = 0; x < n_outer; ++x) {
      const std::uint32_t base = static_cast<std::uint32_t>(x) << layout_.n_extended;
      for (Eigen::Index e = 0; e < de; ++e) {
        m(x, e) = v_cols(full.index(base | er.mask(e)), static_cast<Eigen::Index>(a));
      }
    }
    sender_columns_.push_back(std::move(m));
  }

  const std::uint32_t receiver_bits = (1u << layout_.n_receiver) - 1;
  for (std::size_t e = 0; e < er.dim(); ++e) {
    const std::uint32_t mask = er.mask(e);
    er_line_part_.push_back(mask >> layout_.n_receiver);
    er_receiver_index_.push_back(receiver.index(mask & receiver_bits));
  }
}

LambdaTensor TransferChannel::contract_columns(
    const std::vector<CMatrix>& columns) const {
  LambdaTensor lambda(layout_.n_receiver, layout_.n_sender);
  lambda.tau = tau_;
  const std::size_t ds = columns.size();
  const auto de = static_cast<Eigen::Index>(er_line_part_.size());
  // lambda(i,j,a,b) = sum over outer rows and matching line parts of
  // Y_a[x, (t,i)] conj(Y_b[x, (t,j)]).
  for (std::size_t a = 0; a < ds; ++a) {
    for (std::size_t b = 0; b < ds; ++b) {
      const CMatrix gram = columns[a].transpose() * columns[b].conjugate();
      for (Eigen::Index p = 0; p < de; ++p) {
        for (Eigen::Index q = 0; q < de; ++q) {
          if (er_line_part_[p] != er_line_part_[q]) continue;
          const std::size_t i = er_receiver_index_[p];
          const std::size_t j = er_receiver_index_[q];
          if (lambda.structurally_zero(i, j, a, b)) continue;
          lambda(i, j, a, b) += gram(p, q);
        }
      }
    }
  }
  return lambda;
}

LambdaTensor TransferChannel::lambda(const CMatrix& u) const {
  const auto de = static_cast<Eigen::Index>(er_line_part_.size());
  if (u.rows() != de || u.cols() != de) {
    throw DimensionError("TransferChannel: unitary has the wrong dimension");
  }
  std::vector<CMatrix> columns;
  columns.reserve(sender_columns_.size());
  for (const auto& m : sender_columns_) columns.push_back(m * u.transpose());
  return contract_columns(columns);
}

LambdaTensor TransferChannel::lambda() const {
  return contract_columns(sender_columns_);
}

}  // namespace xyrestore
