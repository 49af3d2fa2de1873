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

#ifndef TBRVI_DIAGNOSTICS_HPP_
#define TBRVI_DIAGNOSTICS_HPP_

// Diagnostics of the chains and policies a learner produces: chain reports,
// the irreducible-and-aperiodic check for a benchmark policy, reachability,
// policy margins and the two Lyapunov functions tracked during training.

#include <algorithm>
#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "tbrvi/core.hpp"
#include "tbrvi/game.hpp"
#include "tbrvi/markov.hpp"
#include "tbrvi/oracle.hpp"
#include "tbrvi/tsallis.hpp"

namespace tbrvi {

struct ChainReport {
  std::optional<Distribution> stationary;
  StepCount mixing_time;
  StepCount r_b;
  double min_stationary = 0.0;
  bool irreducible_aperiodic = false;
  std::string note;
};

inline ChainReport analyze_chain(const Matrix& p, double epsilon = 0.25,
                                 std::size_t mixing_cap = 10000) {
  ChainReport rep;
  rep.r_b = compute_r_b(p);
  rep.irreducible_aperiodic = rep.r_b.finite();
  try {
    rep.stationary = stationary_distribution(p);
    rep.min_stationary = rep.stationary->minCoeff();
    rep.mixing_time = mixing_time(p, *rep.stationary, epsilon, mixing_cap);
  } catch (const ReducibleChainError& e) {
    rep.note = e.what();
    rep.mixing_time = StepCount::saturated_at(mixing_cap);
  }
  return rep;
}

struct Assumption3Report {
  bool holds = false;
  StepCount r_b;
  double mu_b_min = 0.0;
  // Empirical geometric decay rate of max_s TV(P^k(s,.), mu) over
  // k in [r_b, r_b + 50]; only set when the assumption holds.
  double rho_b_estimate = 0.0;
};

inline Assumption3Report check_assumption3(const MarkovGame& game,
                                           const JointPolicy& pi_b,
                                           std::size_t k_max) {
  const Matrix chain = induced_chain(game, pi_b);
  Assumption3Report rep;
  rep.r_b = compute_r_b(chain, k_max);
  rep.holds = rep.r_b.finite();
  if (!rep.holds) return rep;
  const Distribution mu = stationary_distribution(chain);
  rep.mu_b_min = mu.minCoeff();
  rep.rho_b_estimate = estimate_decay_rate(chain, mu, rep.r_b.value);
  return rep;
}

inline Assumption3Report check_assumption3(const MarkovGame& game,
                                           const JointPolicy& pi_b) {
  return check_assumption3(game, pi_b, default_rb_cap(game.n_states()));
}

// 1 / min_s mu(s): the expected-return-time constant of a single policy.
inline double reachability_constant(const Distribution& mu) {
  const double lo = mu.minCoeff();
  if (!(lo > 0.0)) {
    throw ReducibleChainError(
        "reachability_constant: stationary distribution has an empty state");
  }
  return 1.0 / lo;
}

inline double reachability_constant(const MarkovGame& game,
                                    const JointPolicy& pi) {
  return reachability_constant(stationary_distribution(induced_chain(game, pi)));
}

// Smallest action probability over players, states and actions.
inline double policy_margin(const JointPolicy& pi) {
  return std::min(pi.pi1.minCoeff(), pi.pi2.minCoeff());
}

// One player's term of the regularized stage-game Nash gap at s:
//   max_w { (w - pi^i)^T qbar + (H(w) - H(pi^i))/eta },  qbar = T^i(v)(s) pi^{-i}(s).
// The maximum is attained at w = sigma(qbar).
inline double lyapunov_policy_player(const MarkovGame& game, const Vector& v,
                                     const JointPolicy& pi, double eta,
                                     std::size_t s, Player p) {
  const Vector qbar = q_target(game, v, pi.of(opponent(p)), p, s);
  const Vector own = pi.of(p).row(static_cast<Eigen::Index>(s)).transpose();
  const Distribution best = tsallis_response(qbar, eta);
  return (best - own).dot(qbar) +
         (tsallis_entropy(best) - tsallis_entropy(own)) / eta;
}

// Regularized Nash gap of the stage game at s, summed over both players.
inline double lyapunov_policy(const MarkovGame& game, const Vector& v1,
                              const Vector& v2, const JointPolicy& pi,
                              double eta, std::size_t s) {
  return lyapunov_policy_player(game, v1, pi, eta, s, Player::kFirst) +
         lyapunov_policy_player(game, v2, pi, eta, s, Player::kSecond);
}

// Sum over states of lyapunov_policy.
inline double lyapunov_policy_total(const MarkovGame& game, const Vector& v1,
                                    const Vector& v2, const JointPolicy& pi,
                                    double eta) {
  double total = 0.0;
  for (std::size_t s = 0; s < game.n_states(); ++s)
    total += lyapunov_policy(game, v1, v2, pi, eta, s);
  return total;
}

// sum_i ||q^i - q_bar^i||_2^2.
inline double lyapunov_q(const Matrix& q1, const Matrix& q2,
                         const Matrix& target1, const Matrix& target2) {
  if (q1.rows() != target1.rows() || q1.cols() != target1.cols() ||
      q2.rows() != target2.rows() || q2.cols() != target2.cols()) {
    throw std::invalid_argument("lyapunov_q: shape mismatch");
  }
  return (q1 - target1).squaredNorm() + (q2 - target2).squaredNorm();
}

}  // namespace tbrvi

#endif  // TBRVI_DIAGNOSTICS_HPP_
