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

#include "xyrestore/entanglement.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/tools/roots.hpp>
#include <boost/random/sobol.hpp>

#include "xyrestore/errors.hpp"
#include "xyrestore/parallel.hpp"

namespace xyrestore {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kScatterChunk = 4096;

/// Tolerance of the Hermiticity, trace and PSD checks on concurrence input.
constexpr double kDensityTol = 1e-9;

double receiver_concurrence(const LambdaTensor& channel, const CVector& psi) {
  return concurrence(channel.contract(projector(psi)));
}

/// Inverse of the CDF (x - sin x cos x) / pi of the density 2 sin^2(x) / pi on [0, pi].
double inverse_sin2_cdf(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return kPi;
  auto f = [u](double x) {
    const double v = (x - std::sin(x) * std::cos(x)) / kPi - u;
    const double dv = 2.0 * std::sin(x) * std::sin(x) / kPi;
    return std::make_pair(v, dv);
  };
  std::uintmax_t iterations = 100;
  return boost::math::tools::newton_raphson_iterate(f, kPi * u, 0.0, kPi, 50, iterations);
}

std::array<double, 2> parameter_range(StateParameter p) {
  switch (p) {
    case StateParameter::phi1:
    case StateParameter::phi2:
      return {0.0, kPi};
    default:
      return {0.0, 2.0 * kPi};
  }
}

/// Draws parameter p from its marginal weight given u in [0, 1).
double from_unit(StateParameter p, double u) {
  switch (p) {
    case StateParameter::phi1:
      return std::acos(1.0 - 2.0 * u);
    case StateParameter::phi2:
      return inverse_sin2_cdf(u);
    default:
      return 2.0 * kPi * u;
  }
}

double& slot(SenderParams& s, StateParameter p) {
  switch (p) {
    case StateParameter::phi0: return s.phi0;
    case StateParameter::phi1: return s.phi1;
    case StateParameter::phi2: return s.phi2;
    case StateParameter::chi1: return s.chi1;
    case StateParameter::chi2: return s.chi2;
    case StateParameter::chi3: return s.chi3;
  }
  throw InvalidArgument("unknown state parameter");
}

constexpr std::array<StateParameter, 6> kAllParameters{
    StateParameter::phi0, StateParameter::phi1, StateParameter::phi2,
    StateParameter::chi1, StateParameter::chi2, StateParameter::chi3};

}  // namespace

double concurrence(const CMatrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) {
    throw DimensionError("concurrence: expected a 4x4 density matrix");
  }
  const Eigen::Matrix4cd r = rho;
  if ((r - r.adjoint()).cwiseAbs().maxCoeff() > kDensityTol ||
      std::abs(r.trace() - 1.0) > kDensityTol) {
    throw MatrixPropertyError("concurrence: input is not Hermitian with unit trace");
  }
  // One eigendecomposition serves the PSD check and the factor X.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> eig(r);
  if (eig.eigenvalues().minCoeff() < -kDensityTol) {
    throw MatrixPropertyError("concurrence: input has a negative eigenvalue");
  }
  const Eigen::Vector4d d = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::Matrix4cd x = eig.eigenvectors() * d.asDiagonal();
  Eigen::Matrix4cd yx;
  yx.row(0) = -x.row(3);
  yx.row(1) = x.row(2);
  yx.row(2) = x.row(1);
  yx.row(3) = -x.row(0);
  const Eigen::Matrix4cd t = x.transpose() * yx;
  const Eigen::Vector4d l = Eigen::JacobiSVD<Eigen::Matrix4cd>(t).singularValues();
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

double pure_state_concurrence(const CVector& psi) {
  if (psi.size() != 4) throw DimensionError("pure_state_concurrence: expected 4 amplitudes");
  return 2.0 * std::abs(psi[0] * psi[3] - psi[1] * psi[2]);
}

std::vector<ConcurrenceSample> scatter_experiment(
    const LambdaTensor& channel, std::size_t n_samples, std::uint64_t seed) {
  if (channel.n_sender() != 2 || channel.n_receiver() != 2) {
    throw DimensionError("scatter_experiment: needs a two-qubit sender and receiver");
  }
  std::vector<ConcurrenceSample> out(n_samples);
  const std::size_t n_chunks = (n_samples + kScatterChunk - 1) / kScatterChunk;
  parallel_for(n_chunks, [&](std::size_t c) {
    auto rng = stream_engine(seed, c);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t end = std::min(n_samples, (c + 1) * kScatterChunk);
    for (std::size_t k = c * kScatterChunk; k < end; ++k) {
      ConcurrenceSample& s = out[k];
      s.params.phi0 = 2.0 * kPi * u(rng);
      s.params.phi1 = kPi * u(rng);
      s.params.phi2 = kPi * u(rng);
      s.params.chi1 = 2.0 * kPi * u(rng);
      s.params.chi2 = 2.0 * kPi * u(rng);
      s.params.chi3 = 2.0 * kPi * u(rng);
      const CVector psi = two_qubit_state(s.params);
      s.c_sender = pure_state_concurrence(psi);
      s.c_receiver = receiver_concurrence(channel, psi);
    }
  });
  return out;
}

AmplificationSummary amplification_summary(const std::vector<ConcurrenceSample>& samples) {
  AmplificationSummary a;
  a.n_samples = samples.size();
  for (const auto& s : samples) {
    if (s.c_receiver > s.c_sender) {
      ++a.n_amplified;
      a.max_amplified_sender = std::max(a.max_amplified_sender, s.c_sender);
    }
  }
  return a;
}

std::string to_string(StateParameter p) {
  switch (p) {
    case StateParameter::phi0: return "phi0";
    case StateParameter::phi1: return "phi1";
    case StateParameter::phi2: return "phi2";
    case StateParameter::chi1: return "chi1";
    case StateParameter::chi2: return "chi2";
    case StateParameter::chi3: return "chi3";
  }
  return "?";
}

StateParameter parse_state_parameter(const std::string& text) {
  for (StateParameter p : kAllParameters) {
    if (to_string(p) == text) return p;
  }
  throw InvalidArgument("unknown state parameter '" + text + "'");
}

std::string to_string(Party p) { return p == Party::sender ? "sender" : "receiver"; }

ConcurrenceStats one_param_stats(
    Party party, StateParameter parameter, const LambdaTensor& channel,
    const StatsOptions& options) {
  if (options.grid_size < 2) throw InvalidArgument("one_param_stats: grid_size must be >= 2");
  if (options.replicas < 2) throw InvalidArgument("one_param_stats: replicas must be >= 2");
  const std::size_t replicas = static_cast<std::size_t>(options.replicas);
  const std::size_t per_replica = options.points_per_node / replicas;
  if (per_replica == 0) throw InvalidArgument("one_param_stats: too few points per node");
  if (party == Party::receiver && (channel.n_sender() != 2 || channel.n_receiver() != 2)) {
    throw DimensionError("one_param_stats: needs a two-qubit sender and receiver");
  }

  std::vector<StateParameter> free;
  for (StateParameter p : kAllParameters) {
    if (p != parameter) free.push_back(p);
  }
  const std::size_t dim = free.size();

  std::vector<double> base(per_replica * dim);
  boost::random::sobol sobol(dim);
  for (double& v : base) v = std::ldexp(static_cast<double>(sobol()), -64);

  // Free parameters for every replica, shared by all nodes.
  std::vector<SenderParams> points(replicas * per_replica);
  auto shift_rng = stream_engine(options.seed, 0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> shifts(replicas * dim);
  for (double& s : shifts) s = unif(shift_rng);
  parallel_for(replicas, [&](std::size_t r) {
    for (std::size_t k = 0; k < per_replica; ++k) {
      SenderParams& p = points[r * per_replica + k];
      for (std::size_t d = 0; d < dim; ++d) {
        double u = base[k * dim + d] + shifts[r * dim + d];
        if (u >= 1.0) u -= 1.0;
        slot(p, free[d]) = from_unit(free[d], u);
      }
    }
  });

  ConcurrenceStats st;
  st.parameter = parameter;
  st.party = party;
  st.points_per_node = replicas * per_replica;
  const std::size_t n = static_cast<std::size_t>(options.grid_size);
  const auto [lo, hi] = parameter_range(parameter);
  st.values.resize(n);
  st.mean.resize(n);
  st.mean_square.resize(n);
  st.delta.resize(n);
  st.stderr_mean.resize(n);
  for (std::size_t g = 0; g < n; ++g) st.values[g] = lo + (hi - lo) * g / (n - 1);

  parallel_for(n, [&](std::size_t g) {
    std::vector<double> replica_mean(replicas, 0.0);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t r = 0; r < replicas; ++r) {
      double rs = 0.0;
      for (std::size_t k = 0; k < per_replica; ++k) {
        SenderParams p = points[r * per_replica + k];
        slot(p, parameter) = st.values[g];
        const CVector psi = two_qubit_state(p);
        const double c = party == Party::sender ? pure_state_concurrence(psi)
                                                : receiver_concurrence(channel, psi);
        rs += c;
        sum_sq += c * c;
      }
      replica_mean[r] = rs / per_replica;
      sum += rs;
    }
    const double total = static_cast<double>(replicas * per_replica);
    st.mean[g] = sum / total;
    st.mean_square[g] = sum_sq / total;
    st.delta[g] = std::sqrt(std::max(0.0, st.mean_square[g] - st.mean[g] * st.mean[g]));
    double var = 0.0;
    for (double m : replica_mean) var += (m - st.mean[g]) * (m - st.mean[g]);
    var /= static_cast<double>(replicas - 1);
    st.stderr_mean[g] = std::sqrt(var / replicas);
  });

  const auto [mn, mx] = std::minmax_element(st.mean.begin(), st.mean.end());
  st.Delta = *mx - *mn;
  const auto [dmn, dmx] = std::minmax_element(st.delta.begin(), st.delta.end());
  st.delta_min = *dmn;
  st.delta_max = *dmx;
  return st;
}

RegionMap region_map_even(const LambdaTensor& channel, int n_chi, int n_phi) {
  if (n_chi < 2 || n_phi < 2) throw InvalidArgument("region_map_even: grid needs >= 2 points per axis");
  if (channel.n_sender() != 2 || channel.n_receiver() != 2) {
    throw DimensionError("region_map_even: needs a two-qubit sender and receiver");
  }
  RegionMap m;
  m.chi.resize(n_chi);
  m.phi.resize(n_phi);
  for (int c = 0; c < n_chi; ++c) m.chi[c] = 2.0 * kPi * c / (n_chi - 1);
  for (int p = 0; p < n_phi; ++p) m.phi[p] = kPi * p / (n_phi - 1);
  m.c_sender.resize(n_chi, n_phi);
  m.c_receiver.resize(n_chi, n_phi);
  parallel_for(static_cast<std::size_t>(n_chi), [&](std::size_t c) {
    for (int p = 0; p < n_phi; ++p) {
      const CVector psi = even_state(m.phi[p], m.chi[c]);
      m.c_sender(c, p) = pure_state_concurrence(psi);
      m.c_receiver(c, p) = receiver_concurrence(channel, psi);
    }
  });
  m.zero_boundary.resize(n_chi);
  for (int c = 0; c < n_chi; ++c) {
    for (int p = 1; p < n_phi; ++p) {
      const bool z0 = m.c_receiver(c, p - 1) <= m.threshold;
      const bool z1 = m.c_receiver(c, p) <= m.threshold;
      if (z0 != z1) m.zero_boundary[c].push_back(0.5 * (m.phi[p - 1] + m.phi[p]));
    }
  }
  return m;
}

}  // namespace xyrestore
