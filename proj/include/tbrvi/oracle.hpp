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

#ifndef TBRVI_ORACLE_HPP_
#define TBRVI_ORACLE_HPP_

// Exact reference computations: matrix-game values by linear programming,
// Shapley's minimax value iteration, policy evaluation, best-response MDPs
// and the Nash gap.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tbrvi/core.hpp"
#include "tbrvi/game.hpp"

namespace tbrvi {

inline constexpr double kDefaultOracleTol = 1e-9;

class LpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IterationCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MatrixGameSolution {
  double value = 0.0;
  Distribution row_strategy;
  Distribution col_strategy;
  // (max_a (X nu)_a - value) + (value - min_b (pi^T X)_b).
  double certificate_gap = 0.0;
};

namespace detail {

inline std::string describe_matrix(const Matrix& x) {
  std::ostringstream os;
  os.precision(17);
  os << "[";
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    os << (i ? "; " : "");
    for (Eigen::Index j = 0; j < x.cols(); ++j) os << (j ? " " : "") << x(i, j);
  }
  os << "]";
  return os.str();
}

inline Distribution clean_strategy(Vector w) {
  w = w.cwiseMax(0.0);
  const double s = w.sum();
  if (!(s > 0.0)) return Distribution::Constant(w.size(), 1.0 / static_cast<double>(w.size()));
  return w / s;
}

}  // namespace detail

// Value of the zero-sum matrix game max_pi min_nu pi^T X nu.
//
// X is shifted by c = 1 + max|X| so every entry is positive. The column
// player's program  max sum(y)  s.t.  X' y <= 1, y >= 0  starts feasible at
// the slack basis and is solved by a dense primal simplex with Bland's rule.
// Its optimal duals are the row player's program  min sum(x)  s.t.
// X'^T x >= 1, x >= 0. Normalizing y and x gives the strategies; the shifted
// value is 1/sum(y).
inline MatrixGameSolution matrix_game_value(const Matrix& x,
                                            double tol = kDefaultOracleTol) {
  if (x.size() == 0) throw std::invalid_argument("matrix_game_value: empty matrix");
  if (!x.allFinite()) {
    throw std::invalid_argument("matrix_game_value: non-finite entry in " +
                                detail::describe_matrix(x));
  }
  const Eigen::Index m = x.rows(), n = x.cols();
  const double shift = 1.0 + x.cwiseAbs().maxCoeff();

  // Constraint rows [X' | I | 1], objective row [-1 | 0 | 0].
  Matrix tab = Matrix::Zero(m + 1, n + m + 1);
  tab.topLeftCorner(m, n) = x.array() + shift;
  tab.block(0, n, m, m).setIdentity();
  tab.col(n + m).head(m).setOnes();
  tab.row(m).head(n).setConstant(-1.0);
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;

  constexpr double kEps = 1e-12;
  const long pivot_cap = 50 * static_cast<long>(m + n) + 1000;
  long pivots = 0;
  for (;;) {
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < n + m; ++j) {
      if (tab(m, j) < -kEps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    Eigen::Index leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      const double a = tab(i, enter);
      if (a <= kEps) continue;
      const double ratio = tab(i, n + m) / a;
      if (leave < 0 || ratio < best_ratio - kEps) {
        leave = i;
        best_ratio = ratio;
      } else if (ratio <= best_ratio + kEps &&
                 basis[static_cast<std::size_t>(i)] <
                     basis[static_cast<std::size_t>(leave)]) {
        // Bland: among tied ratios, the smallest basic variable leaves.
        leave = i;
        best_ratio = std::min(best_ratio, ratio);
      }
    }
    if (leave < 0) {
      throw LpError("matrix_game_value: unbounded program for " +
                    detail::describe_matrix(x));
    }
    if (++pivots > pivot_cap) {
      throw LpError("matrix_game_value: pivot cap exceeded for " +
                    detail::describe_matrix(x));
    }
    tab.row(leave) /= tab(leave, enter);
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double f = tab(i, enter);
      if (f != 0.0) tab.row(i) -= f * tab.row(leave);
    }
    basis[static_cast<std::size_t>(leave)] = enter;
  }

  Vector y = Vector::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index b = basis[static_cast<std::size_t>(i)];
    if (b < n) y[b] = tab(i, n + m);
  }
  const Vector duals = tab.row(m).segment(n, m).transpose();
  const double total = y.sum();
  if (!(total > 0.0)) {
    throw LpError("matrix_game_value: degenerate optimum for " +
                  detail::describe_matrix(x));
  }

  MatrixGameSolution sol;
  sol.col_strategy = detail::clean_strategy(y);
  sol.row_strategy = detail::clean_strategy(duals);
  // The certificate brackets the value: worst_col <= value <= best_row.
  const double best_row = (x * sol.col_strategy).maxCoeff();
  const double worst_col = (sol.row_strategy.transpose() * x).minCoeff();
  sol.value = 0.5 * (best_row + worst_col);
  sol.certificate_gap = best_row - worst_col;
  if (!(sol.certificate_gap <= tol)) {
    throw LpError("matrix_game_value: certificate gap " +
                  std::to_string(sol.certificate_gap) + " above tolerance for " +
                  detail::describe_matrix(x));
  }
  return sol;
}

// B^i(v)(s) = val(T^i(v)(s)) for every state, with the stage solutions.
inline std::vector<MatrixGameSolution> bellman_minimax_detail(
    const MarkovGame& game, const Vector& v, Player player,
    double tol = kDefaultOracleTol) {
  std::vector<MatrixGameSolution> out;
  out.reserve(game.n_states());
  for (std::size_t s = 0; s < game.n_states(); ++s)
    out.push_back(matrix_game_value(payoff_matrix(game, v, s, player), tol));
  return out;
}

inline Vector bellman_minimax(const MarkovGame& game, const Vector& v,
                              Player player, double tol = kDefaultOracleTol) {
  const auto stage = bellman_minimax_detail(game, v, player, tol);
  Vector out(static_cast<Eigen::Index>(stage.size()));
  for (std::size_t s = 0; s < stage.size(); ++s)
    out[static_cast<Eigen::Index>(s)] = stage[s].value;
  return out;
}

struct SolveReport {
  Vector v_star;
  std::size_t iterations = 0;
  // ||B(v_star) - v_star||_inf.
  double residual = 0.0;
  // Stage-game equilibria at v_star, seen from the solving player.
  std::vector<MatrixGameSolution> stage;
};

// Iterates B^i from v = 0 until ||v_{n+1} - v_n|| <= tol (1-gamma)/(2 gamma),
// which puts v_{n+1} within tol of the fixed point.
inline SolveReport shapley_solve(const MarkovGame& game, Player player,
                                 double tol = kDefaultOracleTol,
                                 std::size_t max_iter = 1000000) {
  const double gamma = game.gamma();
  const double stop = tol * (1.0 - gamma) / (2.0 * gamma);
  const double lp_tol = std::max(1e-12, std::min(kDefaultOracleTol, tol * 1e-2));
  Vector v = Vector::Zero(static_cast<Eigen::Index>(game.n_states()));
  for (std::size_t it = 1; it <= max_iter; ++it) {
    Vector next = bellman_minimax(game, v, player, lp_tol);
    const double diff = sup_norm(next - v);
    v = std::move(next);
    if (diff <= stop) {
      SolveReport rep;
      rep.stage = bellman_minimax_detail(game, v, player, lp_tol);
      Vector bv(v.size());
      for (std::size_t s = 0; s < rep.stage.size(); ++s)
        bv[static_cast<Eigen::Index>(s)] = rep.stage[s].value;
      rep.residual = sup_norm(bv - v);
      rep.v_star = std::move(v);
      rep.iterations = it;
      return rep;
    }
  }
  throw IterationCapError("shapley_solve: iteration cap " +
                          std::to_string(max_iter) + " exceeded");
}

struct ShapleyEquilibrium {
  SolveReport first;
  SolveReport second;
  // ||v*^1 + v*^2||_inf, zero for an exact solve.
  double anti_symmetry = 0.0;
  // Stage equilibria of player 1's final matrix games.
  JointPolicy policy;
};

inline ShapleyEquilibrium shapley_equilibrium(const MarkovGame& game,
                                              double tol = kDefaultOracleTol) {
  ShapleyEquilibrium eq;
  eq.first = shapley_solve(game, Player::kFirst, tol);
  eq.second = shapley_solve(game, Player::kSecond, tol);
  eq.anti_symmetry = sup_norm(eq.first.v_star + eq.second.v_star);
  eq.policy = JointPolicy::uniform(game);
  for (std::size_t s = 0; s < game.n_states(); ++s) {
    const auto si = static_cast<Eigen::Index>(s);
    eq.policy.pi1.row(si) = eq.first.stage[s].row_strategy.transpose();
    eq.policy.pi2.row(si) = eq.first.stage[s].col_strategy.transpose();
  }
  return eq;
}

// Expected one-step reward of `player` under the joint policy.
inline Vector policy_reward(const MarkovGame& game, const JointPolicy& pi,
                            Player player) {
  check_policy_shape(game, pi);
  const double sign = player == Player::kFirst ? 1.0 : -1.0;
  Vector r = Vector::Zero(static_cast<Eigen::Index>(game.n_states()));
  for (Eigen::Index s = 0; s < r.size(); ++s)
    for (Eigen::Index a1 = 0; a1 < pi.pi1.cols(); ++a1)
      for (Eigen::Index a2 = 0; a2 < pi.pi2.cols(); ++a2)
        r[s] += pi.pi1(s, a1) * pi.pi2(s, a2) * sign * game.r1(s, a1, a2);
  return r;
}

namespace detail {

// Solves (I - gamma P) v = r; falls back to value iteration when the
// direct solve misses the 1e-10 residual.
inline Vector evaluate_chain(const Matrix& p, const Vector& r, double gamma) {
  const Eigen::Index n = p.rows();
  const Matrix a = Matrix::Identity(n, n) - gamma * p;
  Vector v = a.partialPivLu().solve(r);
  if (v.allFinite() && sup_norm(a * v - r) <= 1e-10) return v;
  v = Vector::Zero(n);
  for (int it = 0; it < 100000; ++it) {
    Vector next = r + gamma * p * v;
    const double diff = sup_norm(next - v);
    v = std::move(next);
    if (diff <= 1e-13) break;
  }
  if (sup_norm(a * v - r) > 1e-10) {
    throw std::runtime_error("policy_evaluate: linear solve failed");
  }
  return v;
}

}  // namespace detail

// v^i_pi, the discounted value of `player` under the joint policy.
inline Vector policy_evaluate(const MarkovGame& game, const JointPolicy& pi,
                              Player player) {
  return detail::evaluate_chain(induced_chain(game, pi),
                                policy_reward(game, pi, player), game.gamma());
}

struct BestResponse {
  Vector value;
  // Deterministic greedy policy, rows are point masses.
  Matrix policy;
  std::size_t iterations = 0;
};

// Best response of `player` to the opponent's per-state policy
// `opponent_pi` (rows indexed by state). The game collapses to a
// single-agent MDP; value iteration runs to tol, then policy iteration
// polishes the greedy policy to the exact optimum. Ties go to the lowest
// action index.
inline BestResponse best_response_value(const MarkovGame& game,
                                        const Matrix& opponent_pi,
                                        Player player,
                                        double tol = kDefaultOracleTol,
                                        std::size_t max_iter = 1000000) {
  const Player opp = opponent(player);
  const auto ns = static_cast<Eigen::Index>(game.n_states());
  const auto na = static_cast<Eigen::Index>(game.n_actions(player));
  const auto nb = static_cast<Eigen::Index>(game.n_actions(opp));
  if (opponent_pi.rows() != ns || opponent_pi.cols() != nb) {
    throw std::invalid_argument("best_response_value: opponent policy shape");
  }
  const double gamma = game.gamma();
  // reward(s, a) and kernel rows indexed by s * na + a.
  Matrix rew = Matrix::Zero(ns, na);
  Matrix kernel = Matrix::Zero(ns * na, ns);
  for (Eigen::Index s = 0; s < ns; ++s)
    for (Eigen::Index a = 0; a < na; ++a)
      for (Eigen::Index b = 0; b < nb; ++b) {
        const double w = opponent_pi(s, b);
        if (w == 0.0) continue;
        const auto a1 = player == Player::kFirst ? a : b;
        const auto a2 = player == Player::kFirst ? b : a;
        rew(s, a) += w * reward(game, static_cast<std::size_t>(s),
                                static_cast<std::size_t>(a1),
                                static_cast<std::size_t>(a2), player);
        kernel.row(s * na + a) +=
            w * game.transition_row(static_cast<std::size_t>(s),
                                    static_cast<std::size_t>(a1),
                                    static_cast<std::size_t>(a2)).transpose();
      }
  const auto action_values = [&](const Vector& v) {
    Matrix qv(ns, na);
    for (Eigen::Index s = 0; s < ns; ++s)
      for (Eigen::Index a = 0; a < na; ++a)
        qv(s, a) = rew(s, a) + gamma * kernel.row(s * na + a).dot(v);
    return qv;
  };

  BestResponse br;
  Vector v = Vector::Zero(ns);
  const double stop = tol * (1.0 - gamma) / (2.0 * gamma);
  bool converged = false;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    Vector next = action_values(v).rowwise().maxCoeff();
    const double diff = sup_norm(next - v);
    v = std::move(next);
    br.iterations = it;
    if (diff <= stop) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw IterationCapError("best_response_value: iteration cap exceeded");
  }

  std::vector<Eigen::Index> choice(static_cast<std::size_t>(ns), 0);
  {
    const Matrix qv = action_values(v);
    for (Eigen::Index s = 0; s < ns; ++s) {
      Eigen::Index best = 0;
      for (Eigen::Index a = 1; a < na; ++a)
        if (qv(s, a) > qv(s, best)) best = a;
      choice[static_cast<std::size_t>(s)] = best;
    }
  }
  for (int round = 0; round < 1000; ++round) {
    Matrix p(ns, ns);
    Vector r(ns);
    for (Eigen::Index s = 0; s < ns; ++s) {
      const Eigen::Index a = choice[static_cast<std::size_t>(s)];
      p.row(s) = kernel.row(s * na + a);
      r[s] = rew(s, a);
    }
    v = detail::evaluate_chain(p, r, gamma);
    const Matrix qv = action_values(v);
    bool changed = false;
    for (Eigen::Index s = 0; s < ns; ++s) {
      const Eigen::Index cur = choice[static_cast<std::size_t>(s)];
      Eigen::Index best = cur;
      for (Eigen::Index a = 0; a < na; ++a)
        if (qv(s, a) > qv(s, best) + 1e-12 * (1.0 + std::abs(qv(s, best)))) best = a;
      if (best != cur) {
        choice[static_cast<std::size_t>(s)] = best;
        changed = true;
      }
    }
    if (!changed) break;
  }
  br.value = std::move(v);
  br.policy = Matrix::Zero(ns, na);
  for (Eigen::Index s = 0; s < ns; ++s) br.policy(s, choice[static_cast<std::size_t>(s)]) = 1.0;
  return br;
}

struct NashGapReport {
  double gap = 0.0;
  // max_pi~ v^i(s0) - v^i_pi(s0) for players 1 and 2.
  double advantage1 = 0.0;
  double advantage2 = 0.0;
  double tol = kDefaultOracleTol;

  double advantage(Player p) const {
    return p == Player::kFirst ? advantage1 : advantage2;
  }
};

// Best-response advantage of `player` at the start state.
inline double best_response_gap(const MarkovGame& game, const JointPolicy& pi,
                                Player player, double tol = kDefaultOracleTol) {
  const auto s0 = static_cast<Eigen::Index>(game.start_state());
  const auto br = best_response_value(game, pi.of(opponent(player)), player, tol);
  return br.value[s0] - policy_evaluate(game, pi, player)[s0];
}

inline NashGapReport nash_gap(const MarkovGame& game, const JointPolicy& pi,
                              double tol = kDefaultOracleTol) {
  NashGapReport rep;
  rep.tol = tol;
  rep.advantage1 = best_response_gap(game, pi, Player::kFirst, tol);
  rep.advantage2 = best_response_gap(game, pi, Player::kSecond, tol);
  rep.gap = rep.advantage1 + rep.advantage2;
  return rep;
}

// q_bar^i(s) = T^i(v)(s) pi^{-i}(s).
inline Vector q_target(const MarkovGame& game, const Vector& v,
                       const Matrix& opponent_pi, Player player,
                       std::size_t s) {
  const Player opp = opponent(player);
  if (opponent_pi.rows() != static_cast<Eigen::Index>(game.n_states()) ||
      opponent_pi.cols() != static_cast<Eigen::Index>(game.n_actions(opp))) {
    throw std::invalid_argument("q_target: opponent policy shape");
  }
  return payoff_matrix(game, v, s, player) *
         opponent_pi.row(static_cast<Eigen::Index>(s)).transpose();
}

inline Matrix q_target_table(const MarkovGame& game, const Vector& v,
                             const Matrix& opponent_pi, Player player) {
  Matrix out(static_cast<Eigen::Index>(game.n_states()),
             static_cast<Eigen::Index>(game.n_actions(player)));
  for (std::size_t s = 0; s < game.n_states(); ++s)
    out.row(static_cast<Eigen::Index>(s)) =
        q_target(game, v, opponent_pi, player, s).transpose();
  return out;
}

}  // namespace tbrvi

#endif  // TBRVI_ORACLE_HPP_
