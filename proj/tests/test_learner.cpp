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


#include <catch_amalgamated.hpp>

#include <cmath>

#include "fixtures.hpp"

using Catch::Approx;
using tbrvi::Matrix;
using tbrvi::Player;
using tbrvi::Vector;

namespace {

tbrvi::ExperimentConfig small_config(std::size_t T, std::size_t K, double eta, std::uint64_t seed) {
  tbrvi::ExperimentConfig c;
  c.T = T;
  c.K = K;
  c.eta = eta;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("step_sizes", "[learner]") {
  const tbrvi::StepSchedule s{1.0, 2.0, 0.5};
  const auto z = tbrvi::step_sizes(0, s);
  CHECK(z.alpha == 0.5);
  CHECK(z.beta == 0.25);
  const tbrvi::StepSchedule d;
  double prev = 2.0;
  for (std::size_t k = 0; k <= 10000; ++k) {
    const auto sz = tbrvi::step_sizes(k, d);
    CHECK(sz.alpha < prev);
    CHECK(sz.alpha > 0.0);
    CHECK(sz.beta == d.c_ab * sz.alpha);
    prev = sz.alpha;
  }
  CHECK_THROWS_AS((tbrvi::StepSchedule{2.0, 2.0, 0.5}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((tbrvi::StepSchedule{1.0, 2.0, 0.0}.validate()), std::invalid_argument);
}

TEST_CASE("policy_update", "[learner]") {
  Vector pi(2), q(2);
  pi << 0.5, 0.5;
  q << 1.0, 0.0;
  CHECK(tbrvi::policy_update(pi, q, 0.0, 1.0) == pi);
  CHECK(tbrvi::policy_update(pi, q, 1.0, 1.0) == tbrvi::tsallis_response(q, 1.0));
  // Pick q so the response is (0.9, 0.1): 4/(x - q_i)^2 with eta = 1.
  const double x = 2.0 / std::sqrt(0.1);
  Vector qq(2);
  qq << x - 2.0 / std::sqrt(0.9), 0.0;
  const Vector out = tbrvi::policy_update(pi, qq, 0.1, 1.0);
  CHECK(out[0] == Approx(0.54).margin(1e-9));
  CHECK(out[1] == Approx(0.46).margin(1e-9));
  CHECK_THROWS_AS(tbrvi::policy_update(pi, q, 1.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(tbrvi::policy_update(pi, Vector::Zero(3), 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("td_update", "[learner]") {
  Matrix q = Matrix::Zero(2, 2);
  Vector v = Vector::Zero(2);
  tbrvi::td_update(q, 0, 1, 1.0, v, 1, 0.5, 0.5);
  CHECK(q(0, 1) == 0.5);
  CHECK(q(0, 0) == 0.0);
  CHECK(q.row(1).isZero());

  Matrix f = Matrix::Constant(1, 2, 0.3);
  Vector w(1);
  w << 0.6;
  tbrvi::td_update(f, 0, 0, 0.0, w, 0, 0.7, 0.5);
  CHECK(f(0, 0) == Approx(0.3).epsilon(1e-15));

  CHECK_THROWS_AS(tbrvi::td_update(q, 2, 0, 0.0, v, 0, 0.5, 0.5), std::out_of_range);
  CHECK_THROWS_AS(tbrvi::td_update(q, 0, 0, 0.0, v, 5, 0.5, 0.5), std::out_of_range);

  SECTION("bound preserved under random updates") {
    tbrvi::Rng rng(51);
    const double gamma = 0.9, b = 1.0 / (1.0 - gamma);
    Matrix t = Matrix::Zero(3, 3);
    bool ok = true;
    for (int k = 0; k < 100000; ++k) {
      const Vector vv = fixtures::random_vector(rng, 3, -b, b);
      const double r = 2.0 * tbrvi::uniform01(rng) - 1.0;
      const double alpha = std::max(1e-6, tbrvi::uniform01(rng));
      tbrvi::td_update(t, k % 3, (k / 3) % 3, r, vv, k % 2, alpha, gamma);
      ok = ok && tbrvi::sup_norm(t) <= b + 1e-12;
    }
    CHECK(ok);
  }
}

TEST_CASE("value_refresh", "[learner]") {
  Matrix pi(1, 2), q(1, 2);
  pi << 0.5, 0.5;
  q << 1.0, 0.0;
  CHECK(tbrvi::value_refresh(pi, q)[0] == 0.5);
  CHECK(tbrvi::value_refresh(pi, Matrix::Zero(1, 2)).isZero());
  Matrix det(2, 3), qq(2, 3);
  qq << 0.1, 0.7, -0.2, 0.4, -1.0, 0.3;
  det << 0, 1, 0, 1, 0, 0;
  const Vector v = tbrvi::value_refresh(det, qq);
  CHECK(v[0] == qq.row(0).maxCoeff());
  CHECK(v[1] == qq.row(1).maxCoeff());
  CHECK_THROWS_AS(tbrvi::value_refresh(pi, qq), std::invalid_argument);
}

TEST_CASE("inner loop", "[learner]") {
  const auto mp = fixtures::matching_pennies();
  SECTION("K = 0 leaves the state alone") {
    auto cfg = small_config(1, 0, 2.0, 1);
    auto st = tbrvi::LearnerState::initial(mp);
    tbrvi::begin_episode(st, mp, cfg);
    const auto before = st;
    tbrvi::Rng rng(1);
    tbrvi::run_inner_loop(st, mp, cfg, rng);
    CHECK(st == before);
  }
  SECTION("K = 1 on one state matches the closed form") {
    auto cfg = small_config(1, 1, 2.0, 3);
    auto st = tbrvi::LearnerState::initial(mp);
    tbrvi::begin_episode(st, mp, cfg);
    tbrvi::Rng rng(3);
    tbrvi::run_inner_loop(st, mp, cfg, rng);

    // q = 0 gives a uniform response, so the policy stays uniform.
    tbrvi::Rng replay(3);
    const Vector half = Vector::Constant(2, 0.5);
    const auto a1 = tbrvi::sample_categorical(half, replay);
    const auto a2 = tbrvi::sample_categorical(half, replay);
    const double alpha0 = cfg.schedule.alpha / cfg.schedule.h;
    const double r = a1 == a2 ? 1.0 : -1.0;
    CHECK(st.q1(0, static_cast<Eigen::Index>(a1)) == Approx(alpha0 * r));
    CHECK(st.q2(0, static_cast<Eigen::Index>(a2)) == Approx(-alpha0 * r));
    CHECK(st.q1(0, 1 - static_cast<Eigen::Index>(a1)) == 0.0);
    CHECK(st.step == 1);
    CHECK(st.pi.pi1 == Matrix::Constant(1, 2, 0.5));
  }
  SECTION("same seed, same state") {
    const auto g = fixtures::two_state_fixture();
    auto cfg = small_config(1, 300, 5.0, 9);
    auto a = tbrvi::LearnerState::initial(g), b = a;
    tbrvi::begin_episode(a, g, cfg);
    tbrvi::begin_episode(b, g, cfg);
    tbrvi::Rng ra(9), rb(9);
    tbrvi::run_inner_loop(a, g, cfg, ra);
    tbrvi::run_inner_loop(b, g, cfg, rb);
    CHECK(a == b);
    CHECK(a.min_margin >= tbrvi::bounded_q_margin_floor(2, 5.0, g.gamma()));
  }
}

TEST_CASE("episodes reset q and the policies only", "[learner]") {
  const auto g = fixtures::two_state_fixture();
  auto cfg = small_config(2, 200, 5.0, 4);
  auto st = tbrvi::LearnerState::initial(g);
  tbrvi::Rng rng(4);
  tbrvi::begin_episode(st, g, cfg);
  tbrvi::run_inner_loop(st, g, cfg, rng);
  tbrvi::end_episode(st, g, cfg);
  const Vector v1 = st.v1, v2 = st.v2;
  const auto env = st.env_state;
  REQUIRE_FALSE(v1.isZero());
  tbrvi::begin_episode(st, g, cfg);
  CHECK(st.q1.isZero());
  CHECK(st.q2.isZero());
  CHECK(st.pi == tbrvi::JointPolicy::uniform(g));
  CHECK(st.v1 == v1);
  CHECK(st.v2 == v2);
  CHECK(st.env_state == env);
  CHECK(st.episode == 1);
  CHECK(st.step == 0);
}

TEST_CASE("run", "[learner]") {
  SECTION("no inner steps returns the uniform policy") {
    const auto g = fixtures::two_state_fixture();
    const auto res = tbrvi::run(g, small_config(1, 0, 1.0, 1));
    CHECK(res.policy == tbrvi::JointPolicy::uniform(g));
    REQUIRE(res.trace.rows.size() == 2);
    CHECK(res.trace.rows[0].t == 0);
    CHECK(res.trace.rows[1].t == 1);
  }
  SECTION("zero rewards give a zero gap") {
    const auto g = fixtures::constant_game(0.0, 0.9, 3, 2);
    const auto res = tbrvi::run(g, small_config(3, 50, 2.0, 2));
    CHECK(std::abs(tbrvi::nash_gap(g, res.policy).gap) <= 1e-9);
    for (const auto& r : res.trace.rows) CHECK(std::abs(r.nash_gap) <= 1e-9);
  }
  SECTION("trace rows and bounds") {
    const auto g = tbrvi::generate_game(fixtures::generator(3, 2, 3, 0.8, 5));
    auto cfg = small_config(7, 100, 3.0, 6);
    cfg.eval_every = 3;
    const auto res = tbrvi::run(g, cfg);
    REQUIRE(res.trace.rows.size() == 4);  // t = 0, 3, 6, 7
    CHECK(res.trace.rows[1].t == 3);
    CHECK(res.trace.rows[3].t == 7);
    for (const auto& r : res.trace.rows) {
      CHECK(std::isfinite(r.nash_gap));
      CHECK(r.nash_gap >= -1e-8);
      CHECK(r.note.empty());
      CHECK(r.wallclock_ns == 0);
      CHECK(r.lyap_pi >= -1e-9);
      CHECK(r.lyap_q >= 0.0);
    }
    const double b = g.value_bound();
    CHECK(tbrvi::sup_norm(res.state.v1) <= b);
    CHECK(tbrvi::sup_norm(res.state.q2) <= b);
    CHECK(tbrvi::is_valid_policy(g, res.policy, 1e-9));
    CHECK(res.state.episode == 7);
  }
  SECTION("deterministic in the seed") {
    const auto g = fixtures::two_state_fixture();
    const auto cfg = small_config(4, 200, 5.0, 12);
    const auto a = tbrvi::run(g, cfg), b = tbrvi::run(g, cfg);
    CHECK(tbrvi::format_trace_csv(a.trace) == tbrvi::format_trace_csv(b.trace));
    CHECK(a.state == b.state);
    auto other = cfg;
    other.seed = 13;
    CHECK_FALSE(tbrvi::run(g, other).state == a.state);
  }
  SECTION("fixed opponent is never modified") {
    const auto g = tbrvi::generate_game(fixtures::generator(3, 2, 2, 0.7, 8));
    tbrvi::Rng rng(52);
    const auto opp = fixtures::random_policy(g, rng);
    auto cfg = small_config(5, 200, 4.0, 3);
    cfg.mode = tbrvi::Mode::kFixedOpponent;
    cfg.opponent_policy = opp;
    const std::string before = tbrvi::format_policy(opp);
    const auto res = tbrvi::run(g, cfg);
    CHECK(tbrvi::format_policy(*cfg.opponent_policy) == before);
    CHECK(res.policy.pi2 == opp.pi2);
    CHECK(res.state.q2.isZero());
    CHECK(res.state.v2.isZero());
    for (const auto& r : res.trace.rows) {
      CHECK(r.v_err_2 == 0.0);
      CHECK(r.nash_gap >= -1e-8);
    }
    // The logged gap is the learner's best-response advantage.
    CHECK(res.trace.rows.back().nash_gap ==
          Approx(tbrvi::best_response_gap(g, res.policy, Player::kFirst)).margin(1e-9));
  }
  SECTION("learner can be player 2") {
    const auto g = fixtures::two_state_fixture();
    auto cfg = small_config(3, 200, 4.0, 3);
    cfg.mode = tbrvi::Mode::kFixedOpponent;
    cfg.learner = Player::kSecond;
    const auto res = tbrvi::run(g, cfg);
    CHECK(res.policy.pi1 == tbrvi::JointPolicy::uniform(g).pi1);
    CHECK_FALSE(res.state.q2.isZero());
  }
  SECTION("config validation") {
    const auto g = fixtures::matching_pennies();
    CHECK_THROWS_AS(tbrvi::run(g, small_config(0, 1, 1.0, 1)), std::invalid_argument);
    CHECK_THROWS_AS(tbrvi::run(g, small_config(1, 1, 0.0, 1)), std::invalid_argument);
    auto big = small_config(1, 1, 1.0, 1);
    big.schedule.c_ab = 20.0;
    CHECK_THROWS_AS(tbrvi::run(g, big), std::invalid_argument);
    auto bad_opp = small_config(1, 1, 1.0, 1);
    bad_opp.mode = tbrvi::Mode::kFixedOpponent;
    bad_opp.opponent_policy = tbrvi::JointPolicy::uniform(fixtures::two_state_fixture());
    CHECK_THROWS_AS(tbrvi::run(g, bad_opp), std::invalid_argument);
  }
}

TEST_CASE("theory constants", "[learner][theory]") {
  const tbrvi::StepSchedule sched;
  SECTION("single state") {
    const auto g = fixtures::constant_game(0.2, 0.5);
    const auto rep = tbrvi::theory_constants(g, 1.0, tbrvi::JointPolicy::uniform(g), sched, 100);
    CHECK(rep.benchmark.r_b == tbrvi::StepCount::reached(0));
    CHECK(std::isfinite(rep.c_ab_bound_margin_sq));
    CHECK(rep.c_ab_bound_margin_sq > 0.0);
  }
  SECTION("two-state fixture at eta = 1") {
    const auto g = fixtures::two_state_fixture();
    const auto rep = tbrvi::theory_constants(g, 1.0, tbrvi::JointPolicy::uniform(g), sched, 1000);
    CHECK(rep.ell_eta == tbrvi::margin_floor(2, 1.0, 0.6));
    CHECK(rep.benchmark.r_b == tbrvi::StepCount::reached(1));
    CHECK(rep.c_ab_bound_margin_sq < 1e-3);
    CHECK(rep.c_ab_bound_stationary < rep.c_ab_bound_margin_sq);
    // Independent evaluation of the bound.
    const double l = 1.0 / std::pow(std::sqrt(2.0) + 1.0 / (2 * 0.4), 2);
    CHECK(rep.c_ab_bound_margin_sq ==
          Approx(l * l * l * l * l * 0.16 / (6272.0 * 2 * 16)).epsilon(1e-12));
    CHECK_FALSE(rep.c_ab_ok);
    CHECK_FALSE(rep.feasible);
    CHECK_FALSE(rep.reasons.empty());
    REQUIRE_FALSE(rep.z_table.empty());
    CHECK(rep.z_table.front().k == 0);
  }
  SECTION("periodic benchmark is reported") {
    const auto g = fixtures::make_game({{{0}}, {{0}}}, {{{{0, 1}}}, {{{1, 0}}}}, 0.5);
    const auto rep = tbrvi::theory_constants(g, 1.0, tbrvi::JointPolicy::uniform(g), sched, 10);
    CHECK_FALSE(rep.benchmark.holds);
    CHECK_FALSE(rep.feasible);
  }
  SECTION("theory_strict refuses an infeasible schedule") {
    const auto g = fixtures::two_state_fixture();
    auto cfg = small_config(1, 10, 1.0, 1);
    cfg.theory_strict = true;
    CHECK_THROWS_AS(tbrvi::run(g, cfg), tbrvi::TheoryInfeasibleError);
  }
}
