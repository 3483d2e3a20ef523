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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "xyrestore/comm_line.hpp"
#include "xyrestore/linalg.hpp"
#include "xyrestore/propagator.hpp"

namespace xyrestore {

/// One amplitude angle of a state family: range and weight sin^power(angle).
struct AngleAxis {
  double lo = 0.0;
  double hi = 0.0;
  int sin_power = 0;
};

/**
 * Weighted family of pure sender states. Each amplitude is a real function of
 * the angles times e^{i chi_k}, with every phase uniform on [0, 2pi].
 */
class StateMeasure {
 public:
  enum class Family {
    /// Six parameters, weight sin(phi1) sin^2(phi2).
    two_qubit,
    /// (sin(phi/2), 0, 0, e^{i chi} cos(phi/2)), weight sin(phi).
    two_qubit_even,
    /// One qubit (sin(theta/2), e^{i chi} cos(theta/2)), weight sin(theta).
    bloch,
  };

  static StateMeasure two_qubit();
  static StateMeasure two_qubit_even();
  static StateMeasure bloch();

  Family family() const { return family_; }
  std::string name() const;
  int n_qubits() const { return family_ == Family::bloch ? 1 : 2; }
  std::size_t dim() const { return std::size_t{1} << n_qubits(); }
  const std::vector<AngleAxis>& angles() const { return angles_; }
  std::size_t n_phases() const { return n_phases_; }
  /// For each amplitude: 0 for no phase, k for e^{i chi_k}.
  const std::vector<int>& phase_labels() const { return phase_labels_; }

  /// Real amplitude factors at the given angles.
  RVector magnitudes(std::span<const double> angles) const;
  CVector state(std::span<const double> angles, std::span<const double> phases) const;

  /// Integral of the weight over angles and phases.
  double volume(int nodes = 32) const;

 private:
  Family family_ = Family::two_qubit;
  std::vector<AngleAxis> angles_;
  std::size_t n_phases_ = 0;
  std::vector<int> phase_labels_;
};

/**
 * M(i, j, a, b) = < conj(psi_i) psi_j psi_a conj(psi_b) > over a measure. Phase
 * averages are exact; angle averages use a tensor Gauss-Legendre rule.
 */
class FourthMoments {
 public:
  FourthMoments(const StateMeasure& measure, int nodes = 32);

  std::size_t dim() const { return dim_; }
  double operator()(std::size_t i, std::size_t j, std::size_t a, std::size_t b) const {
    return data_[((i * dim_ + j) * dim_ + a) * dim_ + b];
  }

 private:
  std::size_t dim_;
  std::vector<double> data_;
};

/// <<psi| r |psi>> with r = lambda(s = |psi><psi|), averaged over the measure.
double averaged_fidelity(const LambdaTensor& lambda, const FourthMoments& moments);

/// Averaged transfer fidelity without a restoring unitary, as a function of tau.
class FidelityEvaluator {
 public:
  FidelityEvaluator(
      CommLayout layout, Spectrum spectrum, const StateMeasure& measure, int nodes = 32);

  double operator()(double tau) const;
  const FourthMoments& moments() const { return moments_; }
  const CommLayout& layout() const { return layout_; }
  const Spectrum& spectrum() const { return spectrum_; }

 private:
  CommLayout layout_;
  Spectrum spectrum_;
  FourthMoments moments_;
};

struct FidelityScan {
  std::vector<std::pair<double, double>> grid;
  double tau0 = 0.0;
  double f0 = 0.0;
  double horizon = 0.0;
  double step = 0.0;
  /// The grid maximum sits on an end of [0, horizon].
  bool boundary = false;
};

/**
 * Evaluates F on {0, step, 2 step, ...} up to horizon, then refines the grid
 * argmax by golden-section search on its neighbouring interval to |d tau| <= tol.
 */
FidelityScan scan_for_tau0(
    const FidelityEvaluator& fidelity, double horizon, double step, double tol = 1e-6);

}  // namespace xyrestore
