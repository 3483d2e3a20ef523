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

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "xyrestore/errors.hpp"
#include "xyrestore/coherence.hpp"
#include "xyrestore/hamiltonian.hpp"
#include "xyrestore/propagator.hpp"

namespace xyrestore {
namespace test_coherence {

SCENARIO("Decomposition into coherence orders") {
  GIVEN("A diagonal state") {
    const GradedBasis b = build_graded_basis(3);
    CMatrix rho = CMatrix::Zero(8, 8);
    rho(0, 0) = 1.0;
    REQUIRE(decompose(rho, b).populated_orders() == std::vector<int>{0});
  }
  GIVEN("A two-spin Bell state") {
    const GradedBasis b = build_graded_basis(2);
    CVector psi = CVector::Zero(4);
    psi[b.index(0b00)] = psi[b.index(0b11)] = 1.0 / std::sqrt(2.0);
    const auto d = decompose(psi * psi.adjoint(), b);
    REQUIRE(d.populated_orders(1e-15) == std::vector<int>{-2, 0, 2});
    const CMatrix& plus2 = d.order(2);
    REQUIRE(std::abs(plus2(b.index(0b00), b.index(0b11)) - 0.5) <= 1e-15);
    REQUIRE((plus2.array() != Complex(0.0, 0.0)).count() == 1);
  }
  GIVEN("A generic two-spin pure state") {
    std::mt19937_64 rng(3);
    const GradedBasis b = build_graded_basis(2);
    const CVector psi = oracle::random_pure(4, rng);
    const auto d = decompose(psi * psi.adjoint(), b);
    REQUIRE(d.populated_orders(1e-12) == std::vector<int>{-2, -1, 0, 1, 2});
  }
  GIVEN("Random Hermitian matrices") {
    std::mt19937_64 rng(9);
    const GradedBasis b = build_graded_basis(4);
    for (int trial = 0; trial < 10; ++trial) {
      const CMatrix rho = oracle::random_density(16, rng);
      const auto d = decompose(rho, b);
      THEN("The orders sum back exactly") { REQUIRE(d.sum() == rho); }
      THEN("Opposite orders are adjoints") {
        for (int n = 0; n <= 4; ++n) REQUIRE(d.order(n).adjoint() == d.order(-n));
      }
    }
  }
  GIVEN("A wrong dimension") {
    REQUIRE_THROWS_AS(decompose(CMatrix::Zero(3, 3), build_graded_basis(2)), DimensionError);
  }
}

SCENARIO("Parity mixing under parity-structured evolution") {
  GIVEN("Identity evolution of a zero-order state") {
    const GradedBasis b = build_graded_basis(3);
    CMatrix rho = CMatrix::Zero(8, 8);
    rho(2, 2) = 1.0;
    const auto report = parity_mixing_check(rho, CMatrix::Identity(8, 8), b);
    REQUIRE(report.evolved_orders == std::vector<int>{0});
    REQUIRE(report.parity_preserved);
  }
  GIVEN("An even-order six-spin state under the chain propagator") {
    const GradedBasis b = build_graded_basis(6);
    const Spectrum s = diagonalize(build_xy_hamiltonian({6, 1.0}, b));
    // (sin(phi/2)|00> + e^{i chi} cos(phi/2)|11>) on the first two sites.
    const double phi = 1.1;
    const double chi = 0.4;
    CVector psi = CVector::Zero(64);
    psi[b.index(0b000000)] = std::sin(phi / 2);
    psi[b.index(0b110000)] = std::polar(std::cos(phi / 2), chi);
    const CMatrix rho = psi * psi.adjoint();
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> t(0.0, 100.0);
    for (int trial = 0; trial < 5; ++trial) {
      const auto report = parity_mixing_check(rho, evolve(s, t(rng)).matrix, b);
      REQUIRE(report.source_orders == std::vector<int>{-2, 0, 2});
      REQUIRE(report.foreign_parity_leak <= 1e-12);
      REQUIRE(report.parity_preserved);
    }
  }
  GIVEN("Random states and random parity unitaries") {
    std::mt19937_64 rng(17);
    const GradedBasis b = build_graded_basis(4);
    for (int trial = 0; trial < 100; ++trial) {
      const CMatrix w = oracle::random_parity_unitary(b, rng);
      // Keep only even orders so the odd ones must stay empty.
      const auto d = decompose(oracle::random_density(16, rng), b);
      CMatrix rho = CMatrix::Zero(16, 16);
      for (int n = -4; n <= 4; n += 2) rho += d.order(n);
      const auto report = parity_mixing_check(rho, w, b, 1e-11);
      REQUIRE(report.foreign_parity_leak <= 1e-11);
    }
  }
  GIVEN("A unitary that mixes parities") {
    const GradedBasis b = build_graded_basis(2);
    CMatrix swap01 = CMatrix::Identity(4, 4);
    swap01(0, 0) = swap01(1, 1) = 0.0;
    swap01(0, 1) = swap01(1, 0) = 1.0;
    try {
      parity_mixing_check(CMatrix::Identity(4, 4) / 4.0, swap01, b);
      FAIL("expected ParityError");
    } catch (const ParityError& e) {
      REQUIRE(std::abs(e.row_block() - e.col_block()) == 1);
    }
  }
}

}  // namespace test_coherence
}  // namespace xyrestore
