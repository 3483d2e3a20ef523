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

#include "xyrestore/graded_basis.hpp"
#include "xyrestore/linalg.hpp"

namespace xyrestore {

/// Homogeneous nearest-neighbour chain. Time is measured as tau = D t.
struct ChainConfig {
  int n_spins = 6;
  double coupling = 1.0;

  /// Throws InvalidArgument unless n_spins >= 2 and coupling != 0.
  void validate() const;
};

/**
 * H = sum_i D (I_x^i I_x^{i+1} - I_y^i I_y^{i+1}) with I = sigma/2, in graded
 * order. Equivalently (D/2) sum_i (I+ I+ + I- I-): every nonzero entry equals
 * D/2 and links states that differ by flipping an adjacent 00 pair to 11.
 */
CMatrix build_xy_hamiltonian(const ChainConfig& cfg, const GradedBasis& basis);

/// Total z-projection sum_i I_z^i in graded order (diagonal).
CMatrix total_z_projection(const GradedBasis& basis);

}  // namespace xyrestore
