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
#include <string>
#include <vector>

#include "xyrestore/comm_line.hpp"
#include "xyrestore/linalg.hpp"
#include "xyrestore/sender_states.hpp"

namespace xyrestore {

/**
 * Wootters concurrence max(0, l1 - l2 - l3 - l4) of a two-qubit density
 * matrix, l_k the descending square roots of the spectrum of
 * rho (sy x sy) conj(rho) (sy x sy). The l_k are computed as singular values
 * of X^T (sy x sy) X with rho = X X^dagger, which stays accurate for
 * (near-)separable states. Throws MatrixPropertyError for non-density input.
 */
double concurrence(const CMatrix& rho);

/// 2 |psi_00 psi_11 - psi_01 psi_10| for a normalised two-qubit vector.
double pure_state_concurrence(const CVector& psi);

struct ConcurrenceSample {
  SenderParams params;
  double c_sender = 0.0;
  double c_receiver = 0.0;
};

/**
 * Draws every angle of the six-parameter family uniformly (phi0, chi_k on
 * [0, 2pi], phi1, phi2 on [0, pi]) and records the sender concurrence and
 * the concurrence of the receiver state lambda(s). Sample k comes from
 * stream k / 4096 of `seed`.
 */
std::vector<ConcurrenceSample> scatter_experiment(
    const LambdaTensor& channel, std::size_t n_samples, std::uint64_t seed);

struct AmplificationSummary {
  std::size_t n_samples = 0;
  std::size_t n_amplified = 0;
  /// Largest sender concurrence among samples with C_r > C_s (0 if none).
  double max_amplified_sender = 0.0;
};

AmplificationSummary amplification_summary(const std::vector<ConcurrenceSample>& samples);

enum class StateParameter { phi0, phi1, phi2, chi1, chi2, chi3 };
enum class Party { sender, receiver };

std::string to_string(StateParameter p);
/// Accepts phi0, phi1, phi2, chi1, chi2, chi3.
StateParameter parse_state_parameter(const std::string& text);
std::string to_string(Party p);

struct StatsOptions {
  /// Nodes of the held parameter, end points included.
  int grid_size = 20;
  /// Quasi-random points per node, split evenly over the shifted replicas.
  std::size_t points_per_node = 131072;
  int replicas = 16;
  std::uint64_t seed = 1;
};

struct ConcurrenceStats {
  StateParameter parameter = StateParameter::phi0;
  Party party = Party::sender;
  std::vector<double> values;
  /// <C>, <C^2>, sqrt(<C^2> - <C>^2) and the standard error of <C> per node.
  std::vector<double> mean;
  std::vector<double> mean_square;
  std::vector<double> delta;
  std::vector<double> stderr_mean;
  /// max(mean) - min(mean).
  double Delta = 0.0;
  double delta_min = 0.0;
  double delta_max = 0.0;
  std::size_t points_per_node = 0;
};

/**
 * One-parameter statistics of the concurrence. For each node of the held
 * parameter the other five are integrated with the weight
 * sin(phi1) sin^2(phi2) normalised to one, by randomly shifted Sobol points
 * mapped through the inverse CDFs of the weight. Sender and receiver use the
 * same points. `channel` is only read for Party::receiver.
 */
ConcurrenceStats one_param_stats(
    Party party, StateParameter parameter, const LambdaTensor& channel,
    const StatsOptions& options = {});

struct RegionMap {
  std::vector<double> chi;
  std::vector<double> phi;
  /// Indexed (chi, phi).
  Eigen::MatrixXd c_sender;
  Eigen::MatrixXd c_receiver;
  /// For each chi, phi values midway between neighbours on which C_r <= threshold flips.
  std::vector<std::vector<double>> zero_boundary;
  double threshold = 1e-9;
};

/// C_s and C_r over the (chi, phi) grid of the even family, end points included.
RegionMap region_map_even(const LambdaTensor& channel, int n_chi, int n_phi);

}  // namespace xyrestore
