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

#include <array>

#include "xyrestore/linalg.hpp"

namespace xyrestore {

/// Angles of the pure two-qubit sender state family.
struct SenderParams {
  double phi0 = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
  double chi1 = 0.0;
  double chi2 = 0.0;
  double chi3 = 0.0;
};

/**
 * (s0 s1 s2, e^{i chi1} c0 s1 s2, e^{i chi2} c1 s2, e^{i chi3} c2) with
 * s_k = sin(phi_k / 2), c_k = cos(phi_k / 2), in graded order |00>,|01>,|10>,|11>.
 */
CVector two_qubit_state(const SenderParams& p);

/// (sin(phi/2), 0, 0, e^{i chi} cos(phi/2)): the family with only orders 0 and +-2.
CVector even_state(double phi, double chi);

/// (sin(theta/2), e^{i chi} cos(theta/2)) for a single sender qubit.
CVector bloch_state(double theta, double chi);

inline CMatrix projector(const CVector& psi) { return psi * psi.adjoint(); }

}  // namespace xyrestore
