// Copyright 2026 The TBRVI Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TBRVI_THEORY_HPP_
#define TBRVI_THEORY_HPP_

// Computable constants of the convergence guarantee: the policy margin, the
// benchmark chain quantities (r_b, mu_b_min, rho_b), the coupling constant
// c_eta, the admissible c_ab, the mixing-time proxies z_k and the step-size
// feasibility condition
//
//   sum_{j=k-z_k}^{k-1} alpha_j <= 1/4 for all k >= z_k,   c_ab * alpha > 2.
//
// c_eta has two readings: c_eta = l_eta^2 (order of magnitude stated with the
// main bound) and c_eta = mu_eta * l_eta with mu_eta >= mu_b_min * l_eta
// (definition used in the analysis). Both are reported.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tbrvi/diagnostics.hpp"
#include "tbrvi/game.hpp"
#include "tbrvi/io.hpp"
#include "tbrvi/markov.hpp"
#include "tbrvi/schedule.hpp"
#include "tbrvi/tsallis.hpp"

namespace tbrvi {

struct ZkEntry {
  std::size_t k = 0;
  double beta_k = 0.0;
  // beta_k-mixing time of the benchmark chain.
  StepCount benchmark_mixing;
  // t_b / ((l_eta^2)^{r_b} mu_b_min); may be +inf.
  double z_k = 0.0;
};

struct TheoryReport {
  double eta = 0.0;
  double gamma = 0.0;
  std::size_t n_states = 0;
  std::size_t a_max = 0;
  double ell_eta = 0.0;
  Assumption3Report benchmark;
  double c_eta_margin_sq = 0.0;
  double c_eta_stationary = 0.0;
  double c_ab_bound_margin_sq = 0.0;
  double c_ab_bound_stationary = 0.0;
  std::vector<ZkEntry> z_table;
  // Two candidate lower bounds on min_s mu_pi(s) over policies with margin
  // l_eta: mu_b_min * (l_eta^2)^{r_b} and mu_b_min * l_eta. Logged only.
  double mu_floor_per_rb = 0.0;
  double mu_floor_per_step = 0.0;
  std::optional<std::size_t> k0;
  // Number of k in [0, horizon) with k >= z_k, i.e. where the step-sum
  // condition applies; the condition is vacuous when this is 0.
  std::size_t stepsum_checked = 0;
  bool stepsum_ok = false;
  bool beta_above_two = false;
  bool c_ab_ok = false;
  bool feasible = false;
  std::vector<std::string> reasons;
};

inline double c_ab_bound(double c_eta, double ell_eta, double gamma,
                         double eta, std::size_t n_states, std::size_t a_max) {
  const double a4 = std::pow(static_cast<double>(a_max), 4);
  return c_eta * std::pow(ell_eta, 3) * (1.0 - gamma) * (1.0 - gamma) /
         (6272.0 * std::pow(eta, 3) * static_cast<double>(n_states) * a4);
}

inline TheoryReport theory_constants(const MarkovGame& game, double eta,
                                     const JointPolicy& pi_b,
                                     const StepSchedule& schedule,
                                     std::size_t horizon,
                                     std::size_t mixing_cap = 10000) {
  TheoryReport rep;
  rep.eta = eta;
  rep.gamma = game.gamma();
  rep.n_states = game.n_states();
  rep.a_max = game.max_actions();
  rep.ell_eta = margin_floor(rep.a_max, eta, rep.gamma);
  rep.benchmark = check_assumption3(game, pi_b);
  rep.c_eta_margin_sq = rep.ell_eta * rep.ell_eta;
  rep.c_ab_bound_margin_sq = c_ab_bound(rep.c_eta_margin_sq, rep.ell_eta, rep.gamma,
                                      eta, rep.n_states, rep.a_max);

  if (!rep.benchmark.holds) {
    rep.reasons.push_back("benchmark chain is not irreducible and aperiodic (r_b " +
                          rep.benchmark.r_b.to_string() + ")");
    rep.c_ab_ok = schedule.c_ab <= rep.c_ab_bound_margin_sq;
    return rep;
  }
  rep.c_eta_stationary = rep.benchmark.mu_b_min * rep.ell_eta * rep.ell_eta;
  rep.c_ab_bound_stationary = c_ab_bound(rep.c_eta_stationary, rep.ell_eta,
                                       rep.gamma, eta, rep.n_states, rep.a_max);

  // max_s TV is non-increasing in k, so one curve answers every lambda.
  const Matrix chain = induced_chain(game, pi_b);
  const Distribution mu = stationary_distribution(chain);
  std::vector<double> tv;
  {
    Matrix power = Matrix::Identity(chain.rows(), chain.cols());
    for (std::size_t k = 0; k <= mixing_cap; ++k) {
      tv.push_back(worst_row_tv(power, mu));
      power = power * chain;
    }
  }
  const auto benchmark_mixing = [&](double lambda) {
    for (std::size_t k = 0; k < tv.size(); ++k)
      if (tv[k] <= lambda) return StepCount::reached(k);
    return StepCount::saturated_at(mixing_cap);
  };
  const double inflation =
      std::pow(rep.ell_eta * rep.ell_eta, static_cast<double>(rep.benchmark.r_b.value)) *
      rep.benchmark.mu_b_min;
  rep.mu_floor_per_rb = inflation;
  rep.mu_floor_per_step = rep.benchmark.mu_b_min * rep.ell_eta;
  const auto z_of = [&](std::size_t k) {
    const StepCount t = benchmark_mixing(step_sizes(k, schedule).beta);
    if (!t.finite()) return std::numeric_limits<double>::infinity();
    return static_cast<double>(t.value) / inflation;
  };

  std::vector<std::size_t> ks = {0, 1, 10, 100, 1000, 10000};
  if (horizon > 0) ks.push_back(horizon - 1);
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  for (const std::size_t k : ks) {
    const auto sz = step_sizes(k, schedule);
    rep.z_table.push_back({k, sz.beta, benchmark_mixing(sz.beta), z_of(k)});
  }

  // k0 = min{k : k >= z_k}, searched up to max(horizon, 10^6).
  const std::size_t search = std::max<std::size_t>(horizon, 1000000);
  for (std::size_t k = 0; k < search; ++k) {
    if (static_cast<double>(k) >= z_of(k)) {
      rep.k0 = k;
      break;
    }
  }

  std::vector<double> prefix(horizon + 1, 0.0);
  for (std::size_t j = 0; j < horizon; ++j)
    prefix[j + 1] = prefix[j] + step_sizes(j, schedule).alpha;
  rep.stepsum_ok = true;
  for (std::size_t k = 0; k < horizon; ++k) {
    const double z = z_of(k);
    if (!(static_cast<double>(k) >= z)) continue;
    ++rep.stepsum_checked;
    const auto zi = static_cast<std::size_t>(std::ceil(z));
    const double sum = prefix[k] - prefix[k - std::min(zi, k)];
    if (sum > 0.25) {
      rep.stepsum_ok = false;
      rep.reasons.push_back("step sum over [k - z_k, k - 1] exceeds 1/4 at k = " +
                            std::to_string(k));
      break;
    }
  }
  rep.beta_above_two = schedule.c_ab * schedule.alpha > 2.0;
  if (!rep.beta_above_two) {
    rep.reasons.push_back("c_ab * alpha = " +
                          detail::format_double(schedule.c_ab * schedule.alpha) +
                          " is not above 2");
  }
  rep.c_ab_ok = schedule.c_ab <= std::min(rep.c_ab_bound_margin_sq, rep.c_ab_bound_stationary);
  if (!rep.c_ab_ok) {
    rep.reasons.push_back("c_ab exceeds the admissible bound (" +
                          detail::format_double(std::min(rep.c_ab_bound_margin_sq,
                                                         rep.c_ab_bound_stationary)) +
                          ")");
  }
  const bool alpha_ok = schedule.alpha / schedule.h < 1.0;
  if (!alpha_ok) rep.reasons.push_back("alpha/h is not below 1");
  rep.feasible = rep.stepsum_ok && rep.beta_above_two && rep.c_ab_ok && alpha_ok;
  return rep;
}

}  // namespace tbrvi

#endif  // TBRVI_THEORY_HPP_
