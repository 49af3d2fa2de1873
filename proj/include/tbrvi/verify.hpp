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

#ifndef TBRVI_VERIFY_HPP_
#define TBRVI_VERIFY_HPP_

// Property suites behind `tbrvi verify`. Every property runs a fixed-seed
// batch of trials and reports the worst slack, i.e. the minimum over trials
// of (allowed - observed); a property passes when the worst slack is
// non-negative and no trial threw.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tbrvi/core.hpp"
#include "tbrvi/game.hpp"
#include "tbrvi/learner.hpp"
#include "tbrvi/markov.hpp"
#include "tbrvi/oracle.hpp"
#include "tbrvi/tsallis.hpp"

namespace tbrvi {

struct VerifyOptions {
  std::uint64_t seed = 20240601;
  // Multiplies the Lipschitz constant under test. Values below 1 exist to
  // check that the harness notices a wrong constant.
  double lipschitz_scale = 1.0;
};

struct PropertyResult {
  std::string name;
  std::size_t trials = 0;
  double worst_slack = std::numeric_limits<double>::infinity();
  bool pass = false;
  std::string error;
};

struct Property {
  std::string suite;
  std::string name;
  std::function<PropertyResult(const VerifyOptions&)> check;
};

namespace detail {

class SlackTracker {
 public:
  explicit SlackTracker(std::string name) { res_.name = std::move(name); }
  void trial(double slack) {
    ++res_.trials;
    if (std::isnan(slack)) slack = -std::numeric_limits<double>::infinity();
    res_.worst_slack = std::min(res_.worst_slack, slack);
  }
  PropertyResult done() {
    res_.pass = res_.trials > 0 && res_.worst_slack >= 0.0;
    return res_;
  }

 private:
  PropertyResult res_;
};

inline double uniform_in(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

inline Vector random_vector(Rng& rng, Eigen::Index n, double lo, double hi) {
  Vector q(n);
  for (Eigen::Index i = 0; i < n; ++i) q[i] = uniform_in(rng, lo, hi);
  return q;
}

inline Distribution random_simplex(Rng& rng, Eigen::Index n) {
  Vector w(n);
  for (Eigen::Index i = 0; i < n; ++i) w[i] = -std::log1p(-uniform01(rng));
  return w / w.sum();
}

// Exhaustive maximization of the regularized payoff over a simplex grid
// with spacing `step` (n = 2 or 3).
inline Distribution grid_argmax(const Vector& q, double eta, double step) {
  const auto m = static_cast<long>(std::lround(1.0 / step));
  const auto f = [&](double a, double b, double c) {
    double v = a * q[0] + b * q[1] + 4.0 * (std::sqrt(a) + std::sqrt(b)) / eta;
    if (q.size() == 3) v += c * q[2] + 4.0 * std::sqrt(c) / eta;
    return v;
  };
  double best = -std::numeric_limits<double>::infinity();
  Distribution arg = Distribution::Zero(q.size());
  if (q.size() == 2) {
    for (long i = 0; i <= m; ++i) {
      const double a = static_cast<double>(i) / static_cast<double>(m);
      const double v = f(a, 1.0 - a, 0.0);
      if (v > best) {
        best = v;
        arg << a, 1.0 - a;
      }
    }
  } else {
    for (long i = 0; i <= m; ++i)
      for (long j = 0; i + j <= m; ++j) {
        const double a = static_cast<double>(i) / static_cast<double>(m);
        const double b = static_cast<double>(j) / static_cast<double>(m);
        const double c = std::max(0.0, 1.0 - a - b);
        const double v = f(a, b, c);
        if (v > best) {
          best = v;
          arg << a, b, c;
        }
      }
  }
  return arg;
}

// Root of sum 4/(eta (q_i - x))^2 = 1 by Newton's method from the left end
// of the bracket. The function is convex and decreasing there, so the
// iterates increase monotonically to the root.
inline double newton_root(const Vector& q, double eta) {
  double x = q.maxCoeff() + 2.0 / eta;
  for (int it = 0; it < 200; ++it) {
    double g = -1.0, dg = 0.0;
    for (Eigen::Index i = 0; i < q.size(); ++i) {
      const double d = x - q[i];
      g += 4.0 / (eta * eta * d * d);
      dg += -8.0 / (eta * eta * d * d * d);
    }
    const double next = x - g / dg;
    if (!(next > x)) break;
    x = next;
  }
  return x;
}

inline MarkovGame verify_game(std::uint64_t seed, std::size_t states,
                              double gamma) {
  GeneratorSpec spec;
  spec.n_states = states;
  spec.n_actions1 = 2;
  spec.n_actions2 = 3;
  spec.branching = std::min<std::size_t>(2, states);
  spec.gamma = gamma;
  spec.seed = seed;
  return generate_game(spec);
}

}  // namespace detail

inline std::vector<Property> property_registry() {
  using detail::SlackTracker;
  std::vector<Property> reg;

  // ---- tsallis ----
  reg.push_back({"tsallis", "tsallis.grid_oracle", [](const VerifyOptions& o) {
                   SlackTracker t("tsallis.grid_oracle");
                   Rng rng(o.seed);
                   for (const Eigen::Index n : {2, 3})
                     for (int k = 0; k < 20; ++k) {
                       const Vector q = detail::random_vector(rng, n, -2.0, 2.0);
                       const double eta = detail::uniform_in(rng, 0.5, 4.0);
                       const Distribution w = tsallis_response(q, eta);
                       const Distribution g = detail::grid_argmax(q, eta, 1e-3);
                       t.trial(2e-3 - (w - g).cwiseAbs().maxCoeff());
                     }
                   return t.done();
                 }});
  reg.push_back({"tsallis", "tsallis.normalization", [](const VerifyOptions& o) {
                   SlackTracker t("tsallis.normalization");
                   Rng rng(o.seed + 1);
                   for (int k = 0; k < 1000; ++k) {
                     const auto n = static_cast<Eigen::Index>(2 + k % 6);
                     const Vector q = detail::random_vector(rng, n, -10.0, 10.0);
                     const double eta = std::exp(detail::uniform_in(rng, -3.0, 4.0));
                     const Distribution w = tsallis_response(q, eta);
                     t.trial(std::min(1e-10 - std::abs(w.sum() - 1.0), w.minCoeff()));
                   }
                   return t.done();
                 }});
  reg.push_back({"tsallis", "tsallis.root_bracket", [](const VerifyOptions& o) {
                   SlackTracker t("tsallis.root_bracket");
                   Rng rng(o.seed + 2);
                   for (int k = 0; k < 1000; ++k) {
                     const auto n = static_cast<Eigen::Index>(2 + k % 7);
                     const Vector q = detail::random_vector(rng, n, -5.0, 5.0);
                     const double eta = std::exp(detail::uniform_in(rng, -3.0, 4.0));
                     const double x = detail::newton_root(q, eta);
                     const auto [lo, hi] = normalization_bracket(q, eta);
                     const double scale = 1e-12 * std::max(1.0, std::abs(x));
                     t.trial(std::min(x - lo, hi - x) + scale);
                   }
                   return t.done();
                 }});
  reg.push_back({"tsallis", "tsallis.margin_spread", [](const VerifyOptions& o) {
                   // q with spread at most 1/(1-gamma): the published floor.
                   SlackTracker t("tsallis.margin_spread");
                   Rng rng(o.seed + 3);
                   for (const std::size_t n : {2u, 3u, 5u})
                     for (const double eta : {0.5, 1.0, 5.0, 20.0})
                       for (const double gamma : {0.5, 0.9, 0.99})
                         for (int k = 0; k < 30; ++k) {
                           const double b = 1.0 / (1.0 - gamma);
                           const double off = detail::uniform_in(rng, -b, 0.0);
                           Vector q = detail::random_vector(
                               rng, static_cast<Eigen::Index>(n), off, off + b);
                           if (k % 3 == 0) {
                             q.setConstant(off);
                             q[0] = off + b;
                           }
                           const Distribution w = tsallis_response(q, eta);
                           t.trial(w.minCoeff() - (margin_floor(n, eta, gamma) - 1e-12));
                         }
                   return t.done();
                 }});
  reg.push_back({"tsallis", "tsallis.margin_box", [](const VerifyOptions& o) {
                   // Any q with ||q||_inf <= 1/(1-gamma).
                   SlackTracker t("tsallis.margin_box");
                   Rng rng(o.seed + 4);
                   for (const std::size_t n : {2u, 3u, 5u})
                     for (const double eta : {0.5, 1.0, 5.0, 20.0})
                       for (const double gamma : {0.5, 0.9, 0.99})
                         for (int k = 0; k < 30; ++k) {
                           const double b = 1.0 / (1.0 - gamma);
                           Vector q = detail::random_vector(
                               rng, static_cast<Eigen::Index>(n), -b, b);
                           if (k % 3 == 0) {
                             q.setConstant(-b);
                             q[0] = b;
                           }
                           const Distribution w = tsallis_response(q, eta);
                           t.trial(w.minCoeff() -
                                   (bounded_q_margin_floor(n, eta, gamma) - 1e-12));
                         }
                   return t.done();
                 }});
  reg.push_back({"tsallis", "tsallis.lipschitz", [](const VerifyOptions& o) {
                   SlackTracker t("tsallis.lipschitz");
                   Rng rng(o.seed + 5);
                   for (int k = 0; k < 1000; ++k) {
                     const auto n = static_cast<Eigen::Index>(2 + k % 5);
                     const double eta = std::exp(detail::uniform_in(rng, -2.0, 3.0));
                     const Vector q = detail::random_vector(rng, n, -3.0, 3.0);
                     const double r = std::exp(detail::uniform_in(rng, -8.0, 0.0));
                     const Vector q2 = q + r * detail::random_vector(rng, n, -1.0, 1.0);
                     const double lhs =
                         (tsallis_response(q, eta) - tsallis_response(q2, eta)).norm();
                     const double rhs = o.lipschitz_scale *
                                        tsallis_lipschitz_constant(static_cast<std::size_t>(n), eta) *
                                        (q - q2).norm();
                     t.trial(rhs - lhs);
                   }
                   return t.done();
                 }});
  reg.push_back({"tsallis", "tsallis.optimality", [](const VerifyOptions& o) {
                   SlackTracker t("tsallis.optimality");
                   Rng rng(o.seed + 6);
                   for (int k = 0; k < 200; ++k) {
                     const auto n = static_cast<Eigen::Index>(2 + k % 5);
                     const double eta = std::exp(detail::uniform_in(rng, -2.0, 3.0));
                     const Vector q = detail::random_vector(rng, n, -3.0, 3.0);
                     const double best = regularized_payoff(tsallis_response(q, eta), q, eta);
                     double rival = -std::numeric_limits<double>::infinity();
                     for (int j = 0; j < 50; ++j)
                       rival = std::max(rival, regularized_payoff(detail::random_simplex(rng, n), q, eta));
                     t.trial(best - rival + 1e-12);
                   }
                   return t.done();
                 }});

  reg.push_back({"tsallis", "tsallis.quadratic_growth", [](const VerifyOptions& o) {
                   // The objective is (1/eta)-strongly concave, so its gap to
                   // the maximizer grows at least like ||w - sigma||^2 / (2 eta).
                   SlackTracker t("tsallis.quadratic_growth");
                   Rng rng(o.seed + 7);
                   for (int k = 0; k < 200; ++k) {
                     const auto n = static_cast<Eigen::Index>(2 + k % 5);
                     const double eta = std::exp(detail::uniform_in(rng, -2.0, 3.0));
                     const Vector q = detail::random_vector(rng, n, -3.0, 3.0);
                     const Distribution w = tsallis_response(q, eta);
                     const double best = regularized_payoff(w, q, eta);
                     for (int j = 0; j < 20; ++j) {
                       const Distribution r = detail::random_simplex(rng, n);
                       const double gap = best - regularized_payoff(r, q, eta);
                       t.trial(gap - (w - r).squaredNorm() / (2.0 * eta) + 1e-8);
                     }
                   }
                   return t.done();
                 }});
  reg.push_back({"tsallis", "tsallis.translation", [](const VerifyOptions& o) {
                   SlackTracker t("tsallis.translation");
                   Rng rng(o.seed + 8);
                   for (int k = 0; k < 200; ++k) {
                     const auto n = static_cast<Eigen::Index>(2 + k % 5);
                     const double eta = std::exp(detail::uniform_in(rng, -2.0, 3.0));
                     const Vector q = detail::random_vector(rng, n, -3.0, 3.0);
                     const double c = detail::uniform_in(rng, -5.0, 5.0);
                     const Vector shifted = (q.array() + c).matrix();
                     const double diff = (tsallis_response(q, eta) -
                                          tsallis_response(shifted, eta)).cwiseAbs().maxCoeff();
                     t.trial(1e-9 - diff);
                   }
                   return t.done();
                 }});

  // ---- learner ----
  reg.push_back({"learner", "learner.step_sizes", [](const VerifyOptions&) {
                   SlackTracker t("learner.step_sizes");
                   const StepSchedule sch{10.0, 100.0, 0.1};
                   double prev = std::numeric_limits<double>::infinity();
                   for (std::size_t k = 0; k <= 10000; ++k) {
                     const StepSizes s = step_sizes(k, sch);
                     t.trial(std::min(prev - s.alpha,
                                      -std::abs(s.beta - sch.c_ab * s.alpha)));
                     prev = s.alpha;
                   }
                   return t.done();
                 }});
  reg.push_back({"learner", "learner.td_bounded", [](const VerifyOptions& o) {
                   SlackTracker t("learner.td_bounded");
                   Rng rng(o.seed + 10);
                   const double gamma = 0.9;
                   const double b = 1.0 / (1.0 - gamma);
                   Matrix q = Matrix::Zero(4, 3);
                   for (int k = 0; k < 100000; ++k) {
                     const Vector v = detail::random_vector(rng, 4, -b, b);
                     const auto s = static_cast<std::size_t>(rng() % 4);
                     const auto a = static_cast<std::size_t>(rng() % 3);
                     const auto s2 = static_cast<std::size_t>(rng() % 4);
                     const double r = detail::uniform_in(rng, -1.0, 1.0);
                     const double alpha = uniform01(rng);
                     td_update(q, s, a, r, v, s2, alpha, gamma);
                     t.trial(b - sup_norm(q));
                   }
                   return t.done();
                 }});
  reg.push_back({"learner", "learner.run_bounded", [](const VerifyOptions& o) {
                   SlackTracker t("learner.run_bounded");
                   const MarkovGame game = detail::verify_game(o.seed + 11, 3, 0.8);
                   ExperimentConfig cfg;
                   cfg.T = 20;
                   cfg.K = 500;
                   cfg.eta = 5.0;
                   cfg.seed = o.seed;
                   cfg.eval_every = 20;
                   const RunResult res = run(game, cfg);
                   const double b = game.value_bound();
                   t.trial(b - std::max<double>({sup_norm(res.state.v1), sup_norm(res.state.v2),
                                         sup_norm(res.state.q1), sup_norm(res.state.q2)}));
                   return t.done();
                 }});
  reg.push_back({"learner", "learner.determinism", [](const VerifyOptions& o) {
                   SlackTracker t("learner.determinism");
                   const MarkovGame game = detail::verify_game(o.seed + 12, 3, 0.8);
                   ExperimentConfig cfg;
                   cfg.T = 3;
                   cfg.K = 300;
                   cfg.eta = 5.0;
                   cfg.seed = o.seed;
                   const auto a = format_trace_csv(run(game, cfg).trace);
                   const auto b = format_trace_csv(run(game, cfg).trace);
                   t.trial(a == b ? 0.0 : -1.0);
                   return t.done();
                 }});
  reg.push_back({"learner", "learner.opponent_frozen", [](const VerifyOptions& o) {
                   SlackTracker t("learner.opponent_frozen");
                   const MarkovGame game = detail::verify_game(o.seed + 13, 3, 0.8);
                   ExperimentConfig cfg;
                   cfg.T = 3;
                   cfg.K = 300;
                   cfg.eta = 5.0;
                   cfg.seed = o.seed;
                   cfg.mode = Mode::kFixedOpponent;
                   JointPolicy opp = JointPolicy::uniform(game);
                   Rng rng(o.seed + 14);
                   for (Eigen::Index s = 0; s < opp.pi2.rows(); ++s)
                     opp.pi2.row(s) = detail::random_simplex(rng, opp.pi2.cols()).transpose();
                   cfg.opponent_policy = opp;
                   const RunResult res = run(game, cfg);
                   t.trial(res.policy.pi2 == opp.pi2 && res.state.q2.isZero(0.0) ? 0.0 : -1.0);
                   return t.done();
                 }});

  // ---- oracle ----
  reg.push_back({"oracle", "oracle.matching_pennies", [](const VerifyOptions&) {
                   SlackTracker t("oracle.matching_pennies");
                   Matrix x(2, 2);
                   x << 1, -1, -1, 1;
                   const auto sol = matrix_game_value(x);
                   t.trial(1e-8 - std::abs(sol.value));
                   t.trial(1e-6 - (sol.row_strategy.array() - 0.5).abs().maxCoeff());
                   t.trial(1e-6 - (sol.col_strategy.array() - 0.5).abs().maxCoeff());
                   return t.done();
                 }});
  reg.push_back({"oracle", "oracle.lp_certificate", [](const VerifyOptions& o) {
                   SlackTracker t("oracle.lp_certificate");
                   Rng rng(o.seed + 20);
                   for (int k = 0; k < 300; ++k) {
                     const auto m = static_cast<Eigen::Index>(1 + rng() % 6);
                     const auto n = static_cast<Eigen::Index>(1 + rng() % 6);
                     Matrix x(m, n);
                     for (Eigen::Index i = 0; i < m; ++i)
                       for (Eigen::Index j = 0; j < n; ++j)
                         x(i, j) = k % 4 == 0 ? static_cast<double>(rng() % 3) - 1.0
                                              : detail::uniform_in(rng, -3.0, 3.0);
                     const auto sol = matrix_game_value(x);
                     const double row_guarantee = (sol.row_strategy.transpose() * x).minCoeff();
                     const double col_guarantee = (x * sol.col_strategy).maxCoeff();
                     t.trial(1e-9 - (col_guarantee - row_guarantee));
                   }
                   return t.done();
                 }});
  reg.push_back({"oracle", "oracle.shapley_residual", [](const VerifyOptions& o) {
                   SlackTracker t("oracle.shapley_residual");
                   for (std::uint64_t g = 0; g < 10; ++g) {
                     const MarkovGame game = detail::verify_game(o.seed + 30 + g, 3, 0.9);
                     const auto eq = shapley_equilibrium(game, 1e-10);
                     const Vector b1 = bellman_minimax(game, eq.first.v_star, Player::kFirst, 1e-12);
                     const Vector b2 = bellman_minimax(game, eq.second.v_star, Player::kSecond, 1e-12);
                     t.trial(1e-9 - sup_norm(b1 - eq.first.v_star));
                     t.trial(1e-9 - sup_norm(b2 - eq.second.v_star));
                     t.trial(2e-9 - eq.anti_symmetry);
                   }
                   return t.done();
                 }});
  reg.push_back({"oracle", "oracle.equilibrium_gap", [](const VerifyOptions& o) {
                   SlackTracker t("oracle.equilibrium_gap");
                   for (std::uint64_t g = 0; g < 10; ++g) {
                     const MarkovGame game = detail::verify_game(o.seed + 30 + g, 3, 0.9);
                     const auto eq = shapley_equilibrium(game, 1e-10);
                     t.trial(1e-4 - nash_gap(game, eq.policy).gap);
                   }
                   return t.done();
                 }});
  reg.push_back({"oracle", "oracle.best_response_dominates", [](const VerifyOptions& o) {
                   SlackTracker t("oracle.best_response_dominates");
                   Rng rng(o.seed + 40);
                   for (std::uint64_t g = 0; g < 10; ++g) {
                     const MarkovGame game = detail::verify_game(o.seed + 41 + g, 4, 0.8);
                     JointPolicy pi = JointPolicy::uniform(game);
                     for (Eigen::Index s = 0; s < pi.pi1.rows(); ++s) {
                       pi.pi1.row(s) = detail::random_simplex(rng, pi.pi1.cols()).transpose();
                       pi.pi2.row(s) = detail::random_simplex(rng, pi.pi2.cols()).transpose();
                     }
                     for (const Player p : {Player::kFirst, Player::kSecond}) {
                       const auto br = best_response_value(game, pi.of(opponent(p)), p);
                       const Vector v = policy_evaluate(game, pi, p);
                       t.trial((br.value - v).minCoeff() + 1e-9);
                     }
                   }
                   return t.done();
                 }});

  // ---- chain ----
  reg.push_back({"chain", "chain.lazy_mixing", [](const VerifyOptions&) {
                   SlackTracker t("chain.lazy_mixing");
                   Matrix p(2, 2);
                   p << 0.75, 0.25, 0.25, 0.75;
                   const StepCount m = mixing_time(p, stationary_distribution(p), 0.1);
                   t.trial(m == StepCount::reached(3) ? 0.0 : -1.0);
                   return t.done();
                 }});
  reg.push_back({"chain", "chain.permutation_saturates", [](const VerifyOptions&) {
                   SlackTracker t("chain.permutation_saturates");
                   for (const Eigen::Index n : {2, 3, 5}) {
                     Matrix p = Matrix::Zero(n, n);
                     for (Eigen::Index i = 0; i < n; ++i) p(i, (i + 1) % n) = 1.0;
                     t.trial(compute_r_b(p).saturated ? 0.0 : -1.0);
                   }
                   return t.done();
                 }});
  reg.push_back({"chain", "chain.generated_rb_finite", [](const VerifyOptions& o) {
                   SlackTracker t("chain.generated_rb_finite");
                   for (std::uint64_t s = 0; s < 20; ++s) {
                     GeneratorSpec spec;
                     spec.n_states = 2 + s % 6;
                     spec.n_actions1 = 2;
                     spec.n_actions2 = 2;
                     spec.branching = 1 + s % spec.n_states;
                     spec.gamma = 0.9;
                     spec.seed = o.seed + 50 + s;
                     const MarkovGame game = generate_game(spec);
                     const StepCount rb = compute_r_b(induced_chain(game, JointPolicy::uniform(game)));
                     t.trial(rb.finite() ? 0.0 : -1.0);
                   }
                   return t.done();
                 }});
  reg.push_back({"chain", "chain.stationary_residual", [](const VerifyOptions& o) {
                   SlackTracker t("chain.stationary_residual");
                   Rng rng(o.seed + 60);
                   for (int k = 0; k < 200; ++k) {
                     const auto n = static_cast<Eigen::Index>(1 + k % 8);
                     Matrix p(n, n);
                     for (Eigen::Index i = 0; i < n; ++i)
                       p.row(i) = detail::random_simplex(rng, n).transpose();
                     const Distribution mu = stationary_distribution(p);
                     t.trial(1e-12 - stationary_residual(p, mu));
                   }
                   return t.done();
                 }});
  return reg;
}

inline std::vector<std::string> suite_names() {
  return {"tsallis", "learner", "oracle", "chain"};
}

// Runs one suite, or every suite for "all". Unknown names throw.
inline std::vector<PropertyResult> run_verify(const std::string& suite,
                                              const VerifyOptions& options = {}) {
  const auto names = suite_names();
  if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end()) {
    throw std::invalid_argument("unknown suite '" + suite + "'");
  }
  std::vector<PropertyResult> out;
  for (const Property& p : property_registry()) {
    if (suite != "all" && p.suite != suite) continue;
    try {
      out.push_back(p.check(options));
    } catch (const std::exception& e) {
      PropertyResult r;
      r.name = p.name;
      r.pass = false;
      r.worst_slack = -std::numeric_limits<double>::infinity();
      r.error = e.what();
      out.push_back(std::move(r));
    }
  }
  return out;
}

inline std::string format_verify_report(const std::vector<PropertyResult>& results) {
  std::ostringstream os;
  os << "property,trials,worst_slack,status\n";
  for (const auto& r : results) {
    os << r.name << ',' << r.trials << ',' << std::setprecision(6) << r.worst_slack << ','
       << (r.pass ? "PASS" : "FAIL");
    if (!r.error.empty()) os << " (" << r.error << ')';
    os << '\n';
  }
  return os.str();
}

inline bool all_passed(const std::vector<PropertyResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const PropertyResult& r) { return r.pass; });
}

}  // namespace tbrvi

#endif  // TBRVI_VERIFY_HPP_
