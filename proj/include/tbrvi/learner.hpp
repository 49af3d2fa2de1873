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

#ifndef TBRVI_LEARNER_HPP_
#define TBRVI_LEARNER_HPP_

// Tsallis-smoothed best-response dynamics with value iteration.
//
// Each episode t starts from q = 0 and uniform policies. For k = 0..K-1:
//
//   pi(s)      <- (1 - beta_k) pi(s) + beta_k sigma(q(s))   for every s
//   a^1, a^2   ~  pi^1(s_k), pi^2(s_k)
//   s_{k+1}    ~  P(. | s_k, a^1, a^2)
//   q(s_k,a_k) <- q(s_k,a_k) + alpha_k (r + gamma v(s_{k+1}) - q(s_k,a_k))
//
// and the episode closes with v(s) <- pi(s)^T q(s). v and the environment
// state carry over between episodes.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tbrvi/core.hpp"
#include "tbrvi/diagnostics.hpp"
#include "tbrvi/game.hpp"
#include "tbrvi/io.hpp"
#include "tbrvi/oracle.hpp"
#include "tbrvi/schedule.hpp"
#include "tbrvi/theory.hpp"
#include "tbrvi/tsallis.hpp"

namespace tbrvi {

// Slack for the runtime bound checks on q and v.
inline constexpr double kBoundSlack = 1e-12;

inline Distribution policy_update(const Eigen::Ref<const Vector>& pi_row,
                                  const Eigen::Ref<const Vector>& q_row,
                                  double beta, const SmoothingParams& params) {
  if (pi_row.size() != q_row.size()) {
    throw std::invalid_argument("policy_update: size mismatch");
  }
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw std::invalid_argument("policy_update: beta outside [0, 1]");
  }
  if (beta == 0.0) return pi_row;
  if (beta == 1.0) return tsallis_response(q_row, params);
  return (1.0 - beta) * pi_row + beta * tsallis_response(q_row, params);
}

inline Distribution policy_update(const Eigen::Ref<const Vector>& pi_row,
                                  const Eigen::Ref<const Vector>& q_row,
                                  double beta, double eta) {
  return policy_update(pi_row, q_row, beta, SmoothingParams{eta});
}

inline void td_update(Matrix& q, std::size_t s, std::size_t a, double r,
                      const Vector& v, std::size_t s_next, double alpha,
                      double gamma) {
  if (s >= static_cast<std::size_t>(q.rows()) ||
      a >= static_cast<std::size_t>(q.cols()) ||
      s_next >= static_cast<std::size_t>(v.size())) {
    throw std::out_of_range("td_update: index out of range");
  }
  const auto si = static_cast<Eigen::Index>(s);
  const auto ai = static_cast<Eigen::Index>(a);
  q(si, ai) = (1.0 - alpha) * q(si, ai) +
              alpha * (r + gamma * v[static_cast<Eigen::Index>(s_next)]);
}

inline Vector value_refresh(const Matrix& pi, const Matrix& q) {
  if (pi.rows() != q.rows() || pi.cols() != q.cols()) {
    throw std::invalid_argument("value_refresh: shape mismatch");
  }
  return pi.cwiseProduct(q).rowwise().sum();
}

enum class Mode { kSelfPlay, kFixedOpponent };

struct ExperimentConfig {
  std::size_t T = 1;
  std::size_t K = 1;
  double eta = 1.0;
  StepSchedule schedule;
  Mode mode = Mode::kSelfPlay;
  // Fixed-opponent mode only. The opponent plays its rows of this policy;
  // unset means uniform.
  std::optional<JointPolicy> opponent_policy;
  Player learner = Player::kFirst;
  std::uint64_t seed = 0;
  std::size_t eval_every = 1;
  bool theory_strict = false;
  double oracle_tol = kDefaultOracleTol;
  bool record_wallclock = false;

  bool learns(Player p) const { return mode == Mode::kSelfPlay || p == learner; }

  void validate() const {
    if (T < 1) throw std::invalid_argument("ExperimentConfig: T must be at least 1");
    // K = 0 is accepted: the run then reports the initial policy.
    if (!(eta > 0.0)) throw std::invalid_argument("ExperimentConfig: eta must be positive");
    if (eval_every < 1) {
      throw std::invalid_argument("ExperimentConfig: eval_every must be at least 1");
    }
    if (!(oracle_tol > 0.0)) {
      throw std::invalid_argument("ExperimentConfig: oracle_tol must be positive");
    }
    schedule.validate();
    if (!(step_sizes(0, schedule).beta <= 1.0)) {
      throw std::invalid_argument("ExperimentConfig: c_ab * alpha / h must be at most 1");
    }
  }
};

struct LearnerState {
  Matrix q1, q2;
  Vector v1, v2;
  JointPolicy pi;
  std::size_t env_state = 0;
  std::size_t episode = 0;
  std::size_t step = 0;
  // Smallest learner policy entry seen since the episode started.
  double min_margin = std::numeric_limits<double>::infinity();

  Matrix& q(Player p) { return p == Player::kFirst ? q1 : q2; }
  const Matrix& q(Player p) const { return p == Player::kFirst ? q1 : q2; }
  Vector& v(Player p) { return p == Player::kFirst ? v1 : v2; }
  const Vector& v(Player p) const { return p == Player::kFirst ? v1 : v2; }

  static LearnerState initial(const MarkovGame& game) {
    const auto ns = static_cast<Eigen::Index>(game.n_states());
    LearnerState st;
    st.q1 = Matrix::Zero(ns, static_cast<Eigen::Index>(game.n_actions1()));
    st.q2 = Matrix::Zero(ns, static_cast<Eigen::Index>(game.n_actions2()));
    st.v1 = Vector::Zero(ns);
    st.v2 = Vector::Zero(ns);
    st.pi = JointPolicy::uniform(game);
    st.env_state = game.start_state();
    return st;
  }

  friend bool operator==(const LearnerState& a, const LearnerState& b) {
    const auto same = [](const auto& x, const auto& y) {
      return x.rows() == y.rows() && x.cols() == y.cols() && x == y;
    };
    return same(a.q1, b.q1) && same(a.q2, b.q2) && same(a.v1, b.v1) &&
           same(a.v2, b.v2) && a.pi == b.pi && a.env_state == b.env_state &&
           a.episode == b.episode && a.step == b.step;
  }
};

// Resets q and the policies for a new episode. In fixed-opponent mode the
// opponent keeps its fixed policy.
inline void begin_episode(LearnerState& st, const MarkovGame& game,
                          const ExperimentConfig& config) {
  st.q1.setZero();
  st.q2.setZero();
  const JointPolicy uniform = JointPolicy::uniform(game);
  for (const Player p : {Player::kFirst, Player::kSecond}) {
    if (config.learns(p)) {
      st.pi.of(p) = uniform.of(p);
    } else {
      st.pi.of(p) = config.opponent_policy ? config.opponent_policy->of(p)
                                           : uniform.of(p);
    }
  }
  st.step = 0;
  st.min_margin = std::numeric_limits<double>::infinity();
}

inline void run_inner_loop(LearnerState& st, const MarkovGame& game,
                           const ExperimentConfig& config, Rng& rng) {
  const double gamma = game.gamma();
  const double bound = game.value_bound() + kBoundSlack;
  const SmoothingParams smoothing{config.eta};
  for (std::size_t k = 0; k < config.K; ++k) {
    const StepSizes sz = step_sizes(st.step, config.schedule);
    for (const Player p : {Player::kFirst, Player::kSecond}) {
      if (!config.learns(p)) continue;
      Matrix& pi = st.pi.of(p);
      const Matrix& q = st.q(p);
      for (Eigen::Index s = 0; s < pi.rows(); ++s) {
        pi.row(s) = policy_update(pi.row(s).transpose(), q.row(s).transpose(),
                                  sz.beta, smoothing)
                        .transpose();
      }
      const double lo = pi.minCoeff();
      const double floor = bounded_q_margin_floor(game.n_actions(p), config.eta, gamma);
      if (lo < floor - 1e-12) {
        throw InvariantViolation("policy margin " + detail::format_double(lo) +
                                 " below floor " + detail::format_double(floor));
      }
      st.min_margin = std::min(st.min_margin, lo);
    }

    const std::size_t s = st.env_state;
    const auto si = static_cast<Eigen::Index>(s);
    const std::size_t a1 = sample_categorical(st.pi.pi1.row(si).transpose(), rng);
    const std::size_t a2 = sample_categorical(st.pi.pi2.row(si).transpose(), rng);
    const std::size_t next = sample_transition(game, s, a1, a2, rng);

    for (const Player p : {Player::kFirst, Player::kSecond}) {
      if (!config.learns(p)) continue;
      const std::size_t a = p == Player::kFirst ? a1 : a2;
      Matrix& q = st.q(p);
      td_update(q, s, a, reward(game, s, a1, a2, p), st.v(p), next, sz.alpha, gamma);
      const double entry = q(si, static_cast<Eigen::Index>(a));
      if (!(std::abs(entry) <= bound)) {
        throw InvariantViolation("q entry " + detail::format_double(entry) +
                                 " exceeds 1/(1-gamma)");
      }
    }
    st.env_state = next;
    ++st.step;
  }
}

// Closes an episode: v <- pi^T q for the learning players.
inline void end_episode(LearnerState& st, const MarkovGame& game,
                        const ExperimentConfig& config) {
  const double bound = game.value_bound() + kBoundSlack;
  for (const Player p : {Player::kFirst, Player::kSecond}) {
    if (!config.learns(p)) continue;
    st.v(p) = value_refresh(st.pi.of(p), st.q(p));
    if (!(sup_norm(st.v(p)) <= bound)) {
      throw InvariantViolation("value table exceeds 1/(1-gamma)");
    }
  }
  ++st.episode;
}

struct TraceRow {
  std::size_t t = 0;
  double nash_gap = 0.0;
  double v_sum_inf = 0.0;
  double v_err_1 = 0.0;
  double v_err_2 = 0.0;
  double min_margin = 0.0;
  double lyap_pi = 0.0;
  double lyap_q = 0.0;
  std::int64_t wallclock_ns = 0;
  // Oracle failure message, empty when the row evaluated cleanly.
  std::string note;
};

struct RunTrace {
  std::vector<TraceRow> rows;
};

inline constexpr const char* kTraceHeader =
    "t,nash_gap,v_sum_inf,v_err_1,v_err_2,min_margin,lyap_pi,lyap_q,wallclock_ns";

inline std::string format_trace_csv(const RunTrace& trace) {
  std::ostringstream os;
  os << kTraceHeader << '\n';
  for (const TraceRow& r : trace.rows) {
    os << r.t << ',' << detail::format_double(r.nash_gap) << ','
       << detail::format_double(r.v_sum_inf) << ','
       << detail::format_double(r.v_err_1) << ','
       << detail::format_double(r.v_err_2) << ','
       << detail::format_double(r.min_margin) << ','
       << detail::format_double(r.lyap_pi) << ','
       << detail::format_double(r.lyap_q) << ',' << r.wallclock_ns << '\n';
  }
  return os.str();
}

struct RunResult {
  JointPolicy policy;
  RunTrace trace;
  LearnerState state;
  std::optional<TheoryReport> theory;
};

class TheoryInfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The fixed opponent's per-state policy.
inline Matrix opponent_matrix(const MarkovGame& game,
                              const ExperimentConfig& config) {
  const Player opp = opponent(config.learner);
  return config.opponent_policy ? config.opponent_policy->of(opp)
                                : JointPolicy::uniform(game).of(opp);
}

namespace detail {

// Oracle quantities that do not change during a run.
struct Reference {
  // Self-play: Shapley values. Fixed opponent: the learner's best-response
  // value, stored in the learner's slot.
  Vector v1, v2;
  std::string error;
};

inline Reference make_reference(const MarkovGame& game,
                                const ExperimentConfig& config) {
  Reference ref;
  try {
    if (config.mode == Mode::kSelfPlay) {
      const ShapleyEquilibrium eq = shapley_equilibrium(game, config.oracle_tol);
      ref.v1 = eq.first.v_star;
      ref.v2 = eq.second.v_star;
    } else {
      const BestResponse br = best_response_value(
          game, opponent_matrix(game, config), config.learner, config.oracle_tol);
      (config.learner == Player::kFirst ? ref.v1 : ref.v2) = br.value;
    }
  } catch (const std::exception& e) {
    ref.error = e.what();
  }
  return ref;
}

inline void append_note(std::string& note, const std::string& what) {
  if (!note.empty()) note += "; ";
  note += what;
}

// One trace row. v_prev holds the values the episode was tracking
// (v_{t-1}); st holds pi_{t,K}, q_{t,K} and the refreshed v_t.
inline TraceRow evaluate_row(const MarkovGame& game,
                             const ExperimentConfig& config,
                             const Reference& ref, std::size_t t,
                             const LearnerState& st, const Vector& v_prev1,
                             const Vector& v_prev2) {
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  TraceRow row;
  row.t = t;

  double margin = st.min_margin;
  for (const Player p : {Player::kFirst, Player::kSecond})
    if (config.learns(p)) margin = std::min(margin, st.pi.of(p).minCoeff());
  row.min_margin = margin;

  const auto err = [&](Player p) {
    if (!config.learns(p)) return 0.0;
    if (!ref.error.empty()) return kNaN;
    return sup_norm(st.v(p) - (p == Player::kFirst ? ref.v1 : ref.v2));
  };
  row.v_err_1 = err(Player::kFirst);
  row.v_err_2 = err(Player::kSecond);
  if (!ref.error.empty()) append_note(row.note, ref.error);
  row.v_sum_inf = config.mode == Mode::kSelfPlay ? sup_norm(st.v1 + st.v2) : 0.0;

  try {
    row.nash_gap = config.mode == Mode::kSelfPlay
                       ? nash_gap(game, st.pi, config.oracle_tol).gap
                       : best_response_gap(game, st.pi, config.learner,
                                           config.oracle_tol);
  } catch (const std::exception& e) {
    row.nash_gap = kNaN;
    append_note(row.note, e.what());
  }

  for (const Player p : {Player::kFirst, Player::kSecond}) {
    if (!config.learns(p)) continue;
    const Vector& v_prev = p == Player::kFirst ? v_prev1 : v_prev2;
    const Matrix target = q_target_table(game, v_prev, st.pi.of(opponent(p)), p);
    row.lyap_q += (st.q(p) - target).squaredNorm();
    for (std::size_t s = 0; s < game.n_states(); ++s)
      row.lyap_pi += lyapunov_policy_player(game, v_prev, st.pi, config.eta, s, p);
  }
  return row;
}

}  // namespace detail

inline RunResult run(const MarkovGame& game, const ExperimentConfig& config) {
  config.validate();
  const auto violations = validate_game(game);
  if (!violations.empty()) {
    throw std::invalid_argument("run: invalid game: " + violations.front().message);
  }
  if (config.mode == Mode::kFixedOpponent && config.opponent_policy &&
      !is_valid_policy(game, *config.opponent_policy, 1e-9)) {
    throw std::invalid_argument("run: opponent policy does not fit the game");
  }

  RunResult out;
  if (config.theory_strict) {
    out.theory = theory_constants(game, config.eta, JointPolicy::uniform(game),
                                  config.schedule, config.K);
    if (!out.theory->feasible) {
      std::string why;
      for (const auto& r : out.theory->reasons) detail::append_note(why, r);
      throw TheoryInfeasibleError("run: schedule outside the guarantee: " + why);
    }
  }

  const auto started = std::chrono::steady_clock::now();
  const auto elapsed = [&]() -> std::int64_t {
    if (!config.record_wallclock) return 0;
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now() - started)
        .count();
  };

  const detail::Reference ref = detail::make_reference(game, config);
  Rng rng(config.seed);
  LearnerState st = LearnerState::initial(game);
  begin_episode(st, game, config);
  {
    TraceRow row = detail::evaluate_row(game, config, ref, 0, st, st.v1, st.v2);
    row.wallclock_ns = elapsed();
    out.trace.rows.push_back(std::move(row));
  }
  for (std::size_t t = 1; t <= config.T; ++t) {
    begin_episode(st, game, config);
    const Vector v_prev1 = st.v1;
    const Vector v_prev2 = st.v2;
    run_inner_loop(st, game, config, rng);
    end_episode(st, game, config);
    if (t % config.eval_every == 0 || t == config.T) {
      TraceRow row = detail::evaluate_row(game, config, ref, t, st, v_prev1, v_prev2);
      row.wallclock_ns = elapsed();
      out.trace.rows.push_back(std::move(row));
    }
  }
  out.policy = st.pi;
  out.state = std::move(st);
  return out;
}

}  // namespace tbrvi

#endif  // TBRVI_LEARNER_HPP_
