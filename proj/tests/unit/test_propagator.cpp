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
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "xyrestore/errors.hpp"
#include "xyrestore/hamiltonian.hpp"
#include "xyrestore/propagator.hpp"

namespace xyrestore {
namespace test_propagator {

namespace {

Spectrum chain_spectrum(int n, double d = 1.0) {
  return diagonalize(build_xy_hamiltonian({n, d}, build_graded_basis(n)));
}

}  // namespace

SCENARIO("Diagonalising chain Hamiltonians") {
  GIVEN("Two spins") {
    const Spectrum s = chain_spectrum(2);
    REQUIRE(s.energies[0] == Catch::Approx(-0.5).margin(1e-14));
    REQUIRE(s.energies[1] == Catch::Approx(0.0).margin(1e-14));
    REQUIRE(s.energies[2] == Catch::Approx(0.0).margin(1e-14));
    REQUIRE(s.energies[3] == Catch::Approx(0.5).margin(1e-14));
  }
  GIVEN("The zero matrix") {
    const Spectrum s = diagonalize(CMatrix::Zero(4, 4));
    REQUIRE(s.energies.isZero(0.0));
    REQUIRE(is_unitary(s.vectors));
  }
  GIVEN("Six spins") {
    const CMatrix h = build_xy_hamiltonian({6, 1.0}, build_graded_basis(6));
    const Spectrum s = diagonalize(h);
    THEN("The decomposition reconstructs H") {
      const CMatrix rec = s.vectors * s.energies.cast<Complex>().asDiagonal() *
                          s.vectors.adjoint();
      REQUIRE(max_norm(rec - h) <= 1e-10);
    }
    THEN("Energies ascend and are symmetric about zero") {
      for (Eigen::Index k = 1; k < s.dim(); ++k) {
        REQUIRE(s.energies[k - 1] <= s.energies[k]);
      }
      for (Eigen::Index k = 0; k < s.dim(); ++k) {
        REQUIRE(std::abs(s.energies[k] + s.energies[s.dim() - 1 - k]) <= 1e-10);
      }
    }
  }
  GIVEN("A non-Hermitian matrix") {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 1) = 1.0;
    REQUIRE_THROWS_AS(diagonalize(m), MatrixPropertyError);
  }
}

SCENARIO("Evolution operators") {
  GIVEN("tau = 0") {
    const Propagator v = evolve(chain_spectrum(5), 0.0);
    REQUIRE(max_norm(v.matrix - CMatrix::Identity(32, 32)) <= 1e-13);
  }
  GIVEN("Two spins at tau = pi") {
    const GradedBasis b = build_graded_basis(2);
    const Propagator v = evolve(chain_spectrum(2), std::numbers::pi);
    REQUIRE(std::abs(v.matrix(b.index(0b11), b.index(0b00))) ==
            Catch::Approx(1.0).margin(1e-12));
    REQUIRE(std::abs(v.matrix(b.index(0b00), b.index(0b00))) <= 1e-12);
    // Closed form: <11|V|00> = -i sin(tau/2).
    REQUIRE(std::abs(v.matrix(b.index(0b11), b.index(0b00)) - Complex(0.0, -1.0)) <= 1e-12);
  }
  GIVEN("Six spins at the registration time") {
    const GradedBasis b = build_graded_basis(6);
    const Propagator v = evolve(chain_spectrum(6), 55.5352);
    REQUIRE(unitarity_defect(v.matrix) <= 1e-10);
    REQUIRE(odd_parity_leak(v.matrix, b) <= 1e-12);
  }
  GIVEN("Non-finite tau") {
    REQUIRE_THROWS_AS(evolve(chain_spectrum(2), std::nan("")), InvalidArgument);
    REQUIRE_THROWS_AS(
        evolve(chain_spectrum(2), std::numeric_limits<double>::infinity()),
        InvalidArgument);
  }
}

SCENARIO("Group law and time reversal") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> t(0.0, 100.0);
  const Spectrum s = chain_spectrum(6);
  for (int trial = 0; trial < 10; ++trial) {
    const double t1 = t(rng);
    const double t2 = t(rng);
    const CMatrix prod = evolve(s, t1).matrix * evolve(s, t2).matrix;
    REQUIRE(max_norm(prod - evolve(s, t1 + t2).matrix) <= 1e-9);
    REQUIRE(max_norm(evolve(s, -t1).matrix - evolve(s, t1).matrix.adjoint()) <= 1e-10);
  }
}

SCENARIO("Eigen-decomposition propagator matches scaling and squaring") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> t(0.0, 30.0);
  for (int n = 2; n <= 4; ++n) {
    const CMatrix h = build_xy_hamiltonian({n, 1.0}, build_graded_basis(n));
    const Spectrum s = diagonalize(h);
    for (int trial = 0; trial < 5; ++trial) {
      const double tau = t(rng);
      const CMatrix ref = oracle::expm_taylor(Complex(0.0, -tau) * h);
      REQUIRE(max_norm(evolve(s, tau).matrix - ref) <= 1e-9);
    }
  }
}

SCENARIO("Selected columns agree with the full propagator") {
  const Spectrum s = chain_spectrum(6);
  const CMatrix v = evolve(s, 12.3).matrix;
  const std::vector<Eigen::Index> cols = {0, 7, 22, 63};
  const CMatrix c = evolve_columns(s, 12.3, cols);
  for (std::size_t k = 0; k < cols.size(); ++k) {
    REQUIRE(max_norm(c.col(k) - v.col(cols[k])) <= 1e-13);
  }
}

}  // namespace test_propagator
}  // namespace xyrestore
