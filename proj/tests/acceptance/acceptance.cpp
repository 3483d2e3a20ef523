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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "xyrestore/comm_line.hpp"
#include "xyrestore/entanglement.hpp"
#include "xyrestore/errors.hpp"
#include "xyrestore/graded_basis.hpp"
#include "xyrestore/hamiltonian.hpp"
#include "xyrestore/propagator.hpp"
#include "xyrestore/registration.hpp"
#include "xyrestore/restoring.hpp"

namespace {

using namespace xyrestore;
using Clock = std::chrono::steady_clock;

constexpr double kPi = std::numbers::pi;

// Pinned tolerances and budgets.
constexpr double kBlockTol = 1e-12;
constexpr double kOracleTol = 1e-10;
constexpr double kTau0Ref = 55.5352;
constexpr double kTau0Tol = 0.01;
constexpr double kF0Ref = 0.7267;
constexpr double kF0Tol = 0.005;
constexpr double kRestoreTol = 1e-7;
constexpr double kLambdaAll = 0.40;
constexpr double kLambdaEven = 0.60;
constexpr double kFloorAll = 0.25;
constexpr double kFloorEven = 0.45;
constexpr double kTableTol = 0.02;
constexpr double kChiMax = 0.02;
constexpr double kSinTol = 1e-12;
constexpr double kAmplifyBelow = 0.8;
constexpr double kWernerTol = 1e-9;
constexpr int kStarts = 1000;
constexpr int kSmokeStarts = 50;
constexpr std::uint64_t kSeeds[] = {1, 2, 3};

int failures = 0;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int id, bool pass, const std::string& text) {
  std::printf("%s  C%-2d %s\n", pass ? "PASS" : "FAIL", id, text.c_str());
  std::fflush(stdout);
  failures += pass ? 0 : 1;
}

std::string fmt(const char* f, auto... args) {
  char buf[1024];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Spectrum chain(int n) { return diagonalize(build_xy_hamiltonian({n, 1.0}, build_graded_basis(n))); }

void block_structure() {
  const auto t0 = Clock::now();
  double h_forbidden = 0.0;
  double v_forbidden = 0.0;
  bool allowed_nonzero = true;
  for (int n = 2; n <= 8; ++n) {
    const GradedBasis basis = build_graded_basis(n);
    const CMatrix h = build_xy_hamiltonian({n, 1.0}, basis);
    const Spectrum s = diagonalize(h);
    for (int a = 0; a <= n; ++a) {
      for (int b = 0; b <= n; ++b) {
        const double norm = block_max_norm(h, basis, a, b);
        if (std::abs(a - b) == 2) {
          allowed_nonzero = allowed_nonzero && norm > 0.0;
        } else {
          h_forbidden = std::max(h_forbidden, norm);
        }
      }
    }
    for (double tau : {0.7, 5.3, 55.5}) {
      v_forbidden = std::max(v_forbidden, odd_parity_leak(evolve(s, tau).matrix, basis));
    }
  }
  const double sec = seconds_since(t0);
  report(1, h_forbidden <= kBlockTol && v_forbidden <= kBlockTol && allowed_nonzero && sec < 30,
         fmt("block structure N=2..8: max |H| off |n-m|=2 %.1e, max |V| odd blocks %.1e "
             "(tol %.0e), |n-m|=2 blocks nonzero: %s, %.1f s (budget 30 s)",
             h_forbidden, v_forbidden, kBlockTol, allowed_nonzero ? "yes" : "no", sec));
}

void oracle_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (const CommLayout& l : {CommLayout{4, 2, 2, 2}, CommLayout{}}) {
    const GradedBasis basis = build_graded_basis(l.n_total);
    for (int k = 0; k < 20; ++k) {
      const CMatrix w = oracle::random_parity_unitary(basis, rng);
      worst = std::max(worst, lambda_tensor_direct(w, l).max_difference(lambda_tensor_oracle(w, l)));
    }
  }
  const double sec = seconds_since(t0);
  report(2, worst <= kOracleTol && sec < 120,
         fmt("lambda multi-index sum vs basis-element propagation, N=4 and N=6, 20 random "
             "parity unitaries each: max diff %.1e (tol %.0e), %.1f s (budget 120 s)",
             worst, kOracleTol, sec));
}

void registration_time() {
  const auto t0 = Clock::now();
  const FidelityEvaluator f(CommLayout{}, chain(6), StateMeasure::two_qubit());
  const FidelityScan scan = scan_for_tau0(f, 100.0, 0.01);
  const double sec = seconds_since(t0);
  report(3, std::abs(scan.tau0 - kTau0Ref) <= kTau0Tol && std::abs(scan.f0 - kF0Ref) <= kF0Tol &&
                !scan.boundary && sec < 300,
         fmt("registration time: tau0 = %.4f (ref %.4f +- %.2f), F = %.5f (ref %.4f +- %.3f), "
             "%.1f s (budget 300 s)",
             scan.tau0, kTau0Ref, kTau0Tol, scan.f0, kF0Ref, kF0Tol, sec));
}

void equation_counts() {
  const CommLayout l;
  const Spectrum s = chain(6);
  const RestoringSystem all(TransferChannel(l, s, 55.5343), restored_element_set(l, RestoreMode::all_orders));
  const RestoringSystem even(TransferChannel(l, s, 55.5343), restored_element_set(l, RestoreMode::even_only));
  const std::size_t p = parameter_count(l.n_extended);
  report(4, all.n_real_equations() == 70 && even.n_real_equations() == 14 && p == 112 &&
                all.n_parameters() == 112,
         fmt("equation counts: all-orders %zu real (expect 70), even-only %zu real (expect 14), "
             "P = %zu (expect 112)",
             all.n_real_equations(), even.n_real_equations(), p));
}

struct SweepResult {
  std::vector<RestoreSolution> accepted;
  double best_lambda = 0.0;
  double best_avr = 0.0;
  RestoreSolution best;
  double seconds = 0.0;
};

SweepResult sweep(const RestoringSystem& system, int starts) {
  SweepResult r;
  const auto t0 = Clock::now();
  for (std::uint64_t seed : kSeeds) {
    std::vector<RestoreSolution> sols;
    try {
      sols = solve_restoring(system, starts, seed);
    } catch (const NoSolutionError&) {
      continue;
    }
    r.accepted.insert(r.accepted.end(), sols.begin(), sols.end());
  }
  r.seconds = seconds_since(t0);
  if (!r.accepted.empty()) {
    r.best = select_optimal(r.accepted);
    r.best_lambda = r.best.metrics.lambda_min.value_or(0.0);
    r.best_avr = r.best.metrics.lambda_avr.value_or(0.0);
  }
  return r;
}

/// Receiver state of W = (I (x) U) V(tau) acting on s (x) |0...0>, in computational order.
struct FullChainOracle {
  FullChainOracle(const CommLayout& l, const Spectrum& spectrum, double tau)
      : layout(l), basis(build_graded_basis(l.n_total)), v(evolve(spectrum, tau).matrix) {
    CMatrix ground = CMatrix::Zero(2, 2);
    ground(0, 0) = 1.0;
    rest = CMatrix::Identity(1, 1);
    for (int k = 0; k < l.n_total - l.n_sender; ++k) rest = oracle::kron(rest, ground);
  }

  CMatrix receiver(const std::vector<double>& phi, const CMatrix& s) const {
    const CMatrix u = build_unitary(make_unitary_params(layout.n_extended, phi));
    const CMatrix w = basis.to_computational(embed_extended_unitary(u, layout) * v);
    const CMatrix rho0 = oracle::kron(s, rest);
    return oracle::trace_keep_last(w * rho0 * w.adjoint(), layout.n_total, layout.n_receiver);
  }

  CommLayout layout;
  GradedBasis basis;
  CMatrix v;
  CMatrix rest;
};

void restoring_correctness(const std::vector<const SweepResult*>& sweeps, double tau,
                           const Spectrum& spectrum) {
  const auto t0 = Clock::now();
  const CommLayout l;
  const FullChainOracle full(l, spectrum, tau);
  std::mt19937_64 rng(55);
  std::vector<CMatrix> senders;
  for (int k = 0; k < 20; ++k) senders.push_back(oracle::random_density(4, rng));
  double worst = 0.0;
  std::size_t n_solutions = 0;
  double slowest = 0.0;
  for (const SweepResult* s : sweeps) {
    for (const RestoreSolution& sol : s->accepted) {
      const auto t1 = Clock::now();
      ++n_solutions;
      for (const CMatrix& st : senders) {
        const CMatrix r = full.receiver(sol.phi, st);
        for (const RestoredLambda& rl : sol.lambdas) {
          const auto [i, j] = std::pair(rl.pos.row, rl.pos.col);
          worst = std::max(worst, std::abs(r(i, j) - rl.value * st(i, j)));
          worst = std::max(worst, std::abs(r(j, i) - std::conj(rl.value) * st(j, i)));
        }
      }
      slowest = std::max(slowest, seconds_since(t1));
    }
  }
  const double sec = seconds_since(t0);
  report(5, n_solutions > 0 && worst <= kRestoreTol && slowest < 60,
         fmt("restoring correctness: %zu accepted solutions x 20 random senders through the "
             "full-chain evolution, max |r_ij - lambda_ij s_ij| = %.1e (tol %.0e), one lambda "
             "per solution; %.1f s total (budget 60 s per solution)",
             n_solutions, worst, kRestoreTol, sec));
}

void optimization_strength(const SweepResult& all, const SweepResult& even, double smoke_seconds) {
  const bool strong = all.best_lambda >= kLambdaAll && even.best_lambda >= kLambdaEven;
  const bool floor = all.best_lambda > kFloorAll && even.best_lambda > kFloorEven;
  report(6, strong && floor && smoke_seconds <= 600 && all.seconds <= 4 * 3600,
         fmt("optimization strength, %d starts x %zu seeds: all-orders best Lambda = %.4f "
             "(Lambda_avr %.4f, need >= %.2f, ref 0.4326), even-only best Lambda = %.4f "
             "(need >= %.2f, ref 0.6681); all-orders sweep %.0f s (budget 4 h), "
             "%d-start smoke %.1f s (budget 600 s)",
             kStarts, std::size(kSeeds), all.best_lambda, all.best_avr, kLambdaAll,
             even.best_lambda, kLambdaEven, all.seconds, kSmokeStarts, smoke_seconds));
}

void sender_statistics() {
  const auto t0 = Clock::now();
  const LambdaTensor unused(2, 2);
  StatsOptions opt;
  opt.grid_size = 20;
  opt.points_per_node = 131072;
  opt.replicas = 16;
  opt.seed = 7;
  const double refs[] = {0.389, 0.540, 0.499};
  const StateParameter phis[] = {StateParameter::phi0, StateParameter::phi1, StateParameter::phi2};
  const StateParameter chis[] = {StateParameter::chi1, StateParameter::chi2, StateParameter::chi3};
  bool pass = true;
  std::string text = "sender concurrence statistics, 20 nodes x 131072 quasi-random points:";
  for (int k = 0; k < 3; ++k) {
    const ConcurrenceStats st = one_param_stats(Party::sender, phis[k], unused, opt);
    const bool ok = std::abs(st.Delta - refs[k]) <= kTableTol;
    pass = pass && ok;
    text += fmt(" Delta_%s = %.4f (ref %.3f +- %.2f%s; end-point difference %.4f;"
                " delta %.3f..%.3f)",
                to_string(phis[k]).c_str(), st.Delta, refs[k], kTableTol, ok ? "" : ", MISS",
                st.mean.back() - st.mean.front(), st.delta_min, st.delta_max);
  }
  for (StateParameter p : chis) {
    const ConcurrenceStats st = one_param_stats(Party::sender, p, unused, opt);
    pass = pass && st.Delta <= kChiMax;
    text += fmt(" Delta_%s = %.5f (<= %.2f)", to_string(p).c_str(), st.Delta, kChiMax);
  }
  const double sec = seconds_since(t0);
  text += fmt("; %.1f s (budget 900 s)", sec);
  report(7, pass && sec < 900, text);
}

void even_analytics(const RestoreSolution& even_best) {
  const LambdaTensor lambda =
      RestoringSystem(TransferChannel(even_best.layout, chain(6), even_best.tau),
                      restored_element_set(even_best.layout, RestoreMode::even_only))
          .tensor(even_best.phi);
  const RegionMap m = region_map_even(lambda, 100, 100);
  double worst = 0.0;
  double worst_density = 0.0;
  double chi_spread = 0.0;
  for (int c = 0; c < 100; ++c) {
    for (int p = 0; p < 100; ++p) {
      const double sin_phi = std::sin(m.phi[p]);
      worst = std::max(worst, std::abs(m.c_sender(c, p) - sin_phi));
      const double c_rho = concurrence(projector(even_state(m.phi[p], m.chi[c])));
      worst_density = std::max(worst_density, std::abs(c_rho - sin_phi));
      chi_spread = std::max(chi_spread, std::abs(m.c_sender(c, p) - m.c_sender(0, p)));
    }
  }
  report(8, worst <= kSinTol && chi_spread <= kSinTol,
         fmt("even family C_s = sin(phi) on a 100x100 (chi, phi) grid: max deviation %.1e, "
             "spread over chi %.1e (tol %.0e); via the density-matrix route %.1e",
             worst, chi_spread, kSinTol, worst_density));
}

void amplification(const RestoreSolution& all_best) {
  const auto t0 = Clock::now();
  const LambdaTensor lambda =
      RestoringSystem(TransferChannel(all_best.layout, chain(6), all_best.tau),
                      restored_element_set(all_best.layout, RestoreMode::all_orders))
          .tensor(all_best.phi);
  const auto samples = scatter_experiment(lambda, 100000, 11);
  const AmplificationSummary a = amplification_summary(samples);
  const double sec = seconds_since(t0);
  report(9, a.n_amplified > 0 && a.max_amplified_sender < kAmplifyBelow && sec < 300,
         fmt("amplification on the best all-orders solution, 100000 samples: %zu with C_r > "
             "C_s, all at C_s <= %.4f (need < %.1f; ref threshold 0.561, not asserted), "
             "%.1f s (budget 300 s)",
             a.n_amplified, a.max_amplified_sender, kAmplifyBelow, sec));
}

void werner() {
  CVector bell = CVector::Zero(4);
  bell[0] = bell[3] = 1.0 / std::sqrt(2.0);
  double worst = 0.0;
  for (double p : {0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0}) {
    const CMatrix rho = p * projector(bell) + (1 - p) * CMatrix::Identity(4, 4) / 4.0;
    worst = std::max(worst, std::abs(concurrence(rho) - std::max(0.0, (3 * p - 1) / 2)));
  }
  report(10, worst <= kWernerTol,
         fmt("Werner mixtures p in {0, 0.2, 1/3, 0.5, 0.8, 1}: max |C - max(0, (3p-1)/2)| = "
             "%.1e (tol %.0e)",
             worst, kWernerTol));
}

}  // namespace

int main() {
  block_structure();
  oracle_equivalence();
  registration_time();
  equation_counts();

  const CommLayout l;
  const Spectrum s = chain(6);
  const double tau = scan_for_tau0(FidelityEvaluator(l, s, StateMeasure::two_qubit()), 100.0, 0.01).tau0;
  const RestoringSystem all_sys(TransferChannel(l, s, tau), restored_element_set(l, RestoreMode::all_orders));
  const RestoringSystem even_sys(TransferChannel(l, s, tau), restored_element_set(l, RestoreMode::even_only));
  const auto t_smoke = Clock::now();
  try {
    solve_restoring(all_sys, kSmokeStarts, 1);
  } catch (const NoSolutionError&) {
  }
  const double smoke_seconds = seconds_since(t_smoke);
  const SweepResult all = sweep(all_sys, kStarts);
  const SweepResult even = sweep(even_sys, kStarts);

  restoring_correctness({&all, &even}, tau, s);
  optimization_strength(all, even, smoke_seconds);
  sender_statistics();
  if (!even.accepted.empty()) {
    even_analytics(even.best);
  } else {
    report(8, false, "even-only: no accepted solution");
  }
  if (!all.accepted.empty()) {
    amplification(all.best);
  } else {
    report(9, false, "all-orders: no accepted solution");
  }
  werner();
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
