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

#ifndef TBRVI_GAME_HPP_
#define TBRVI_GAME_HPP_

// Tabular two-player zero-sum stochastic games: storage, validation,
// simulation, stage payoff matrices and induced Markov chains.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tbrvi/core.hpp"
#include "tbrvi/markov.hpp"

namespace tbrvi {

// Dense game tables. Only player 1's reward is stored; player 2 receives
// the negation, so the zero-sum identity holds exactly.
//
// The constructor checks shapes only. Use validate_game for the
// probability and reward-range invariants.
class MarkovGame {
 public:
  MarkovGame(std::size_t n_states, std::size_t n_actions1,
             std::size_t n_actions2, std::vector<double> transition,
             std::vector<double> reward1, double gamma,
             std::size_t start_state)
      : n_states_(n_states),
        n_actions1_(n_actions1),
        n_actions2_(n_actions2),
        transition_(std::move(transition)),
        reward1_(std::move(reward1)),
        gamma_(gamma),
        start_state_(start_state) {
    if (n_states_ == 0 || n_actions1_ == 0 || n_actions2_ == 0) {
      throw std::invalid_argument("MarkovGame: sizes must be positive");
    }
    if (reward1_.size() != joint_count()) {
      throw std::invalid_argument("MarkovGame: reward table has wrong size");
    }
    if (transition_.size() != joint_count() * n_states_) {
      throw std::invalid_argument("MarkovGame: transition table has wrong size");
    }
  }

  std::size_t n_states() const { return n_states_; }
  std::size_t n_actions1() const { return n_actions1_; }
  std::size_t n_actions2() const { return n_actions2_; }
  std::size_t n_actions(Player p) const {
    return p == Player::kFirst ? n_actions1_ : n_actions2_;
  }
  std::size_t max_actions() const { return std::max(n_actions1_, n_actions2_); }
  double gamma() const { return gamma_; }
  std::size_t start_state() const { return start_state_; }
  double value_bound() const { return 1.0 / (1.0 - gamma_); }

  double r1(std::size_t s, std::size_t a1, std::size_t a2) const {
    return reward1_[joint_index(s, a1, a2)];
  }
  double p(std::size_t s, std::size_t a1, std::size_t a2,
           std::size_t next) const {
    return transition_[joint_index(s, a1, a2) * n_states_ + next];
  }
  // P(. | s, a1, a2) as a contiguous row.
  Eigen::Map<const Vector> transition_row(std::size_t s, std::size_t a1,
                                          std::size_t a2) const {
    return Eigen::Map<const Vector>(
        transition_.data() + joint_index(s, a1, a2) * n_states_,
        static_cast<Eigen::Index>(n_states_));
  }

  const std::vector<double>& transition_table() const { return transition_; }
  const std::vector<double>& reward1_table() const { return reward1_; }

  void check_indices(std::size_t s, std::size_t a1, std::size_t a2) const {
    if (s >= n_states_ || a1 >= n_actions1_ || a2 >= n_actions2_) {
      throw std::out_of_range("MarkovGame: index (" + std::to_string(s) + "," +
                              std::to_string(a1) + "," + std::to_string(a2) +
                              ") out of range");
    }
  }

  friend bool operator==(const MarkovGame&, const MarkovGame&) = default;

 private:
  std::size_t joint_count() const { return n_states_ * n_actions1_ * n_actions2_; }
  std::size_t joint_index(std::size_t s, std::size_t a1, std::size_t a2) const {
    return (s * n_actions1_ + a1) * n_actions2_ + a2;
  }

  std::size_t n_states_;
  std::size_t n_actions1_;
  std::size_t n_actions2_;
  std::vector<double> transition_;
  std::vector<double> reward1_;
  double gamma_;
  std::size_t start_state_;
};

// Per-state action distributions for both players; row s of pi1 is
// pi^1(. | s).
struct JointPolicy {
  Matrix pi1;
  Matrix pi2;

  const Matrix& of(Player p) const { return p == Player::kFirst ? pi1 : pi2; }
  Matrix& of(Player p) { return p == Player::kFirst ? pi1 : pi2; }

  static JointPolicy uniform(const MarkovGame& game) {
    const auto s = static_cast<Eigen::Index>(game.n_states());
    const auto n1 = static_cast<Eigen::Index>(game.n_actions1());
    const auto n2 = static_cast<Eigen::Index>(game.n_actions2());
    return {Matrix::Constant(s, n1, 1.0 / static_cast<double>(n1)),
            Matrix::Constant(s, n2, 1.0 / static_cast<double>(n2))};
  }

  friend bool operator==(const JointPolicy& a, const JointPolicy& b) {
    return a.pi1.rows() == b.pi1.rows() && a.pi1.cols() == b.pi1.cols() &&
           a.pi2.rows() == b.pi2.rows() && a.pi2.cols() == b.pi2.cols() &&
           a.pi1 == b.pi1 && a.pi2 == b.pi2;
  }
};

inline void check_policy_shape(const MarkovGame& game, const JointPolicy& pi) {
  const auto s = static_cast<Eigen::Index>(game.n_states());
  if (pi.pi1.rows() != s || pi.pi2.rows() != s ||
      pi.pi1.cols() != static_cast<Eigen::Index>(game.n_actions1()) ||
      pi.pi2.cols() != static_cast<Eigen::Index>(game.n_actions2())) {
    throw std::invalid_argument("policy dimensions do not match the game");
  }
}

inline bool is_valid_policy(const MarkovGame& game, const JointPolicy& pi,
                            double tol = 1e-12) {
  try {
    check_policy_shape(game, pi);
  } catch (const std::invalid_argument&) {
    return false;
  }
  for (Eigen::Index s = 0; s < pi.pi1.rows(); ++s) {
    if (!is_distribution(pi.pi1.row(s).transpose(), tol) ||
        !is_distribution(pi.pi2.row(s).transpose(), tol))
      return false;
  }
  return true;
}

struct Violation {
  std::string message;
  // (s, a1, a2) when the violation is attached to a table entry.
  long s = -1, a1 = -1, a2 = -1;
};

inline constexpr double kProbabilityTolerance = 1e-12;

inline std::vector<Violation> validate_game(const MarkovGame& game) {
  std::vector<Violation> out;
  const auto where = [](std::size_t s, std::size_t a1, std::size_t a2) {
    return "(" + std::to_string(s) + "," + std::to_string(a1) + "," +
           std::to_string(a2) + ")";
  };
  for (std::size_t s = 0; s < game.n_states(); ++s)
    for (std::size_t a1 = 0; a1 < game.n_actions1(); ++a1)
      for (std::size_t a2 = 0; a2 < game.n_actions2(); ++a2) {
        const auto row = game.transition_row(s, a1, a2);
        const auto idx = [&] {
          return Violation{"", static_cast<long>(s), static_cast<long>(a1),
                           static_cast<long>(a2)};
        };
        bool negative = false;
        for (Eigen::Index j = 0; j < row.size(); ++j)
          negative = negative || !(row[j] >= 0.0);
        if (negative) {
          auto v = idx();
          v.message = "transition row " + where(s, a1, a2) +
                      " has a negative or non-finite entry";
          out.push_back(std::move(v));
        }
        const double sum = row.sum();
        if (!(std::abs(sum - 1.0) <= kProbabilityTolerance)) {
          auto v = idx();
          std::ostringstream os;
          os.precision(17);
          os << "transition row " << where(s, a1, a2) << " sums to " << sum;
          v.message = os.str();
          out.push_back(std::move(v));
        }
        const double r = game.r1(s, a1, a2);
        if (!(std::abs(r) <= 1.0)) {
          auto v = idx();
          std::ostringstream os;
          os.precision(17);
          os << "reward " << where(s, a1, a2) << " = " << r
             << " outside [-1, 1]";
          v.message = os.str();
          out.push_back(std::move(v));
        }
      }
  if (!(game.gamma() > 0.0 && game.gamma() < 1.0)) {
    out.push_back({"gamma " + std::to_string(game.gamma()) +
                   " outside (0, 1)"});
  }
  if (game.start_state() >= game.n_states()) {
    out.push_back({"start state " + std::to_string(game.start_state()) +
                   " out of range"});
  }
  return out;
}

inline double reward(const MarkovGame& game, std::size_t s, std::size_t a1,
                     std::size_t a2, Player player) {
  game.check_indices(s, a1, a2);
  const double r = game.r1(s, a1, a2);
  return player == Player::kFirst ? r : -r;
}

// Draws s' ~ P(. | s, a1, a2) with exactly one engine draw.
inline std::size_t sample_transition(const MarkovGame& game, std::size_t s,
                                     std::size_t a1, std::size_t a2, Rng& rng) {
  game.check_indices(s, a1, a2);
  return sample_categorical(game.transition_row(s, a1, a2), rng);
}

using PayoffMatrix = Matrix;

// T^i(v)(s, a^i, a^{-i}) = R^i + gamma * sum_{s'} P(s' | s, .) v(s').
// Rows are indexed by the given player's actions.
inline PayoffMatrix payoff_matrix(const MarkovGame& game, const Vector& v,
                                  std::size_t s, Player player) {
  if (static_cast<std::size_t>(v.size()) != game.n_states()) {
    throw std::invalid_argument("payoff_matrix: value table has wrong length");
  }
  if (s >= game.n_states()) throw std::out_of_range("payoff_matrix: state");
  const auto n1 = static_cast<Eigen::Index>(game.n_actions1());
  const auto n2 = static_cast<Eigen::Index>(game.n_actions2());
  const double gamma = game.gamma();
  if (player == Player::kFirst) {
    PayoffMatrix m(n1, n2);
    for (Eigen::Index a1 = 0; a1 < n1; ++a1)
      for (Eigen::Index a2 = 0; a2 < n2; ++a2)
        m(a1, a2) = game.r1(s, a1, a2) + gamma * game.transition_row(s, a1, a2).dot(v);
    return m;
  }
  PayoffMatrix m(n2, n1);
  for (Eigen::Index a1 = 0; a1 < n1; ++a1)
    for (Eigen::Index a2 = 0; a2 < n2; ++a2)
      m(a2, a1) = -game.r1(s, a1, a2) + gamma * game.transition_row(s, a1, a2).dot(v);
  return m;
}

// P_pi(s, s') = sum_{a1,a2} pi1(a1|s) pi2(a2|s) P(s'|s,a1,a2).
inline Matrix induced_chain(const MarkovGame& game, const JointPolicy& pi) {
  check_policy_shape(game, pi);
  const auto n = static_cast<Eigen::Index>(game.n_states());
  Matrix chain = Matrix::Zero(n, n);
  for (Eigen::Index s = 0; s < n; ++s)
    for (Eigen::Index a1 = 0; a1 < pi.pi1.cols(); ++a1)
      for (Eigen::Index a2 = 0; a2 < pi.pi2.cols(); ++a2) {
        const double w = pi.pi1(s, a1) * pi.pi2(s, a2);
        if (w != 0.0) chain.row(s) += w * game.transition_row(s, a1, a2).transpose();
      }
  return chain;
}

struct GeneratorSpec {
  std::size_t n_states = 2;
  std::size_t n_actions1 = 2;
  std::size_t n_actions2 = 2;
  std::size_t branching = 2;
  double gamma = 0.9;
  std::uint64_t seed = 0;
  double hub_mass = 0.05;
  std::size_t max_attempts = 64;

  friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Random game whose chain under the uniform joint policy is irreducible and
// aperiodic. Each (s, a1, a2) row puts Dirichlet(1) weights on `branching`
// distinct uniformly chosen states plus hub_mass on state 0 (the hub); the
// hub's self-loop forces aperiodicity once the chain is irreducible.
// Rewards are i.i.d. uniform on [-1, 1]. Candidates failing the r_b check
// are redrawn from the same stream, up to max_attempts.
inline MarkovGame generate_game(const GeneratorSpec& spec) {
  if (spec.n_states == 0 || spec.n_actions1 == 0 || spec.n_actions2 == 0 ||
      spec.branching == 0) {
    throw std::invalid_argument("generate_game: sizes must be >= 1");
  }
  if (spec.branching > spec.n_states) {
    throw std::invalid_argument("generate_game: branching exceeds state count");
  }
  if (!(spec.gamma > 0.0 && spec.gamma < 1.0)) {
    throw std::invalid_argument("generate_game: gamma must lie in (0, 1)");
  }
  if (!(spec.hub_mass > 0.0 && spec.hub_mass < 1.0)) {
    throw std::invalid_argument("generate_game: hub_mass must lie in (0, 1)");
  }
  Rng rng(spec.seed);
  const std::size_t n = spec.n_states;
  const std::size_t rows = n * spec.n_actions1 * spec.n_actions2;
  std::vector<std::size_t> perm(n);

  for (std::size_t attempt = 0; attempt < spec.max_attempts; ++attempt) {
    std::vector<double> transition(rows * n, 0.0);
    std::vector<double> reward(rows, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      // Partial Fisher-Yates: first `branching` entries are the support.
      for (std::size_t i = 0; i < spec.branching; ++i) {
        const std::size_t j =
            i + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n - i));
        std::swap(perm[i], perm[std::min(j, n - 1)]);
      }
      std::vector<double> w(spec.branching);
      double total = 0.0;
      for (auto& x : w) {
        x = -std::log1p(-uniform01(rng)) + 1e-12;
        total += x;
      }
      double* row = transition.data() + r * n;
      for (std::size_t i = 0; i < spec.branching; ++i)
        row[perm[i]] += (1.0 - spec.hub_mass) * w[i] / total;
      row[0] += spec.hub_mass;
      double sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) sum += row[j];
      for (std::size_t j = 0; j < n; ++j) row[j] /= sum;
      reward[r] = 2.0 * uniform01(rng) - 1.0;
    }
    MarkovGame game(n, spec.n_actions1, spec.n_actions2, std::move(transition),
                    std::move(reward), spec.gamma, 0);
    const Matrix chain = induced_chain(game, JointPolicy::uniform(game));
    if (compute_r_b(chain).finite()) return game;
  }
  throw GenerationError("generate_game: no irreducible aperiodic game after " +
                        std::to_string(spec.max_attempts) +
                        " attempts (seed " + std::to_string(spec.seed) + ")");
}

}  // namespace tbrvi

#endif  // TBRVI_GAME_HPP_
