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

#include "xyrestore/sender_states.hpp"

#include <cmath>

namespace xyrestore {

namespace {

/// m e^{i chi}; m may be negative.
Complex phased(double m, double chi) { return Complex(m * std::cos(chi), m * std::sin(chi)); }

}  // namespace

CVector two_qubit_state(const SenderParams& p) {
  const double s0 = std::sin(p.phi0 / 2);
  const double c0 = std::cos(p.phi0 / 2);
  const double s1 = std::sin(p.phi1 / 2);
  const double c1 = std::cos(p.phi1 / 2);
  const double s2 = std::sin(p.phi2 / 2);
  const double c2 = std::cos(p.phi2 / 2);
  CVector psi(4);
  psi << s0 * s1 * s2, phased(c0 * s1 * s2, p.chi1), phased(c1 * s2, p.chi2),
      phased(c2, p.chi3);
  return psi;
}

CVector even_state(double phi, double chi) {
  CVector psi = CVector::Zero(4);
  psi[0] = std::sin(phi / 2);
  psi[3] = phased(std::cos(phi / 2), chi);
  return psi;
}

CVector bloch_state(double theta, double chi) {
  CVector psi(2);
  psi << std::sin(theta / 2), phased(std::cos(theta / 2), chi);
  return psi;
}

}  // namespace xyrestore
