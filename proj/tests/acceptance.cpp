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


// Acceptance checks. One PASS/FAIL line per criterion; the exit status is
// nonzero when any criterion fails. Reference values come from oracles in
// this file (grid search, bisection, exact envelopes of small matrix games,
// enumeration of deterministic policies), not from the library's solvers.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "tbrvi.hpp"

namespace {

using tbrvi::Matrix;
using tbrvi::MarkovGame;
using tbrvi::Player;
using tbrvi::Rng;
using tbrvi::Vector;

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("C%d %s %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * tbrvi::uniform01(rng); }

Vector random_vec(Rng& rng, Eigen::Index n, double lo, double hi) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform(rng, lo, hi);
  return v;
}

double median(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  return n % 2 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

// ---- Tsallis oracles --------------------------------------------------------

double objective(const Vector& w, const Vector& q, double eta) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) h += std::sqrt(w[i]);
  return w.dot(q) + 4.0 * h / eta;
}

// Maximizer over the simplex grid with spacing `step` (n = 2 or 3).
Vector grid_argmax(const Vector& q, double eta, double step) {
  const int m = static_cast<int>(std::lround(1.0 / step));
  Vector w(q.size()), best;
  double top = -1e300;
  if (q.size() == 2) {
    for (int i = 0; i <= m; ++i) {
      w << double(i) / m, double(m - i) / m;
      if (const double f = objective(w, q, eta); f > top) top = f, best = w;
    }
    return best;
  }
  for (int i = 0; i <= m; ++i)
    for (int j = 0; i + j <= m; ++j) {
      w << double(i) / m, double(j) / m, double(m - i - j) / m;
      if (const double f = objective(w, q, eta); f > top) top = f, best = w;
    }
  return best;
}

// Root of sum_i 4/(eta (x - q_i))^2 = 1 above max q, by bisection on a wide
// bracket that does not use the claimed one.
double normalization_root(const Vector& q, double eta) {
  double lo = q.maxCoeff() + 1e-15, hi = q.maxCoeff() + 1e6;
  for (int it = 0; it < 400 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    double g = 0.0;
    for (Eigen::Index i = 0; i < q.size(); ++i) g += 4.0 / std::pow(eta * (mid - q[i]), 2);
    (g > 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// ---- game oracles -----------------------------------------------------------

// Exact value of a matrix game with two rows (row player maximizes): the
// maximum of the lower envelope of lines, attained at 0, 1 or a crossing.
double value_two_rows(const Matrix& x) {
  std::vector<double> cand = {0.0, 1.0};
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index k = j + 1; k < x.cols(); ++k) {
      const double d = (x(0, j) - x(1, j)) - (x(0, k) - x(1, k));
      if (d != 0.0) {
        const double p = (x(1, k) - x(1, j)) / d;
        if (p > 0.0 && p < 1.0) cand.push_back(p);
      }
    }
  double best = -1e300;
  for (const double p : cand)
    best = std::max(best, (p * x.row(0) + (1 - p) * x.row(1)).minCoeff());
  return best;
}

// Exact value when the column player has two actions.
double value_two_cols(const Matrix& x) { return -value_two_rows(-x.transpose()); }

double value_small(const Matrix& x) {
  if (x.rows() == 2) return value_two_rows(x);
  if (x.cols() == 2) return value_two_cols(x);
  throw std::logic_error("value_small: needs two rows or two columns");
}

Matrix stage(const MarkovGame& g, const Vector& v, std::size_t s, Player p) {
  const auto n1 = static_cast<Eigen::Index>(g.n_actions1());
  const auto n2 = static_cast<Eigen::Index>(g.n_actions2());
  const double sign = p == Player::kFirst ? 1.0 : -1.0;
  Matrix m = p == Player::kFirst ? Matrix(n1, n2) : Matrix(n2, n1);
  for (Eigen::Index a = 0; a < n1; ++a)
    for (Eigen::Index b = 0; b < n2; ++b) {
      double cont = 0.0;
      for (std::size_t t = 0; t < g.n_states(); ++t) cont += g.p(s, a, b, t) * v[t];
      const double val = sign * g.r1(s, a, b) + g.gamma() * cont;
      (p == Player::kFirst ? m(a, b) : m(b, a)) = val;
    }
  return m;
}

Vector value_of(const MarkovGame& g, const tbrvi::JointPolicy& pi, Player p) {
  const auto n = static_cast<Eigen::Index>(g.n_states());
  Matrix P = Matrix::Zero(n, n);
  Vector r = Vector::Zero(n);
  const double sign = p == Player::kFirst ? 1.0 : -1.0;
  for (Eigen::Index s = 0; s < n; ++s)
    for (Eigen::Index a = 0; a < pi.pi1.cols(); ++a)
      for (Eigen::Index b = 0; b < pi.pi2.cols(); ++b) {
        const double w = pi.pi1(s, a) * pi.pi2(s, b);
        r[s] += w * sign * g.r1(s, a, b);
        for (Eigen::Index t = 0; t < n; ++t) P(s, t) += w * g.p(s, a, b, t);
      }
  return (Matrix::Identity(n, n) - g.gamma() * P).fullPivLu().solve(r);
}

// max over deterministic policies of `p` of its value at the start state.
double best_value(const MarkovGame& g, const tbrvi::JointPolicy& pi, Player p) {
  const std::size_t ns = g.n_states(), na = g.n_actions(p);
  std::size_t total = 1;
  for (std::size_t s = 0; s < ns; ++s) total *= na;
  double best = -1e300;
  for (std::size_t code = 0; code < total; ++code) {
    tbrvi::JointPolicy alt = pi;
    Matrix& m = alt.of(p);
    m.setZero();
    std::size_t c = code;
    for (std::size_t s = 0; s < ns; ++s, c /= na) m(static_cast<Eigen::Index>(s), c % na) = 1.0;
    best = std::max(best, value_of(g, alt, p)[static_cast<Eigen::Index>(g.start_state())]);
  }
  return best;
}

double advantage(const MarkovGame& g, const tbrvi::JointPolicy& pi, Player p) {
  return best_value(g, pi, p) - value_of(g, pi, p)[static_cast<Eigen::Index>(g.start_state())];
}

double gap(const MarkovGame& g, const tbrvi::JointPolicy& pi) {
  return advantage(g, pi, Player::kFirst) + advantage(g, pi, Player::kSecond);
}

MarkovGame random_game(std::size_t states, std::size_t a1, std::size_t a2, double gamma,
                       std::uint64_t seed) {
  tbrvi::GeneratorSpec spec;
  spec.n_states = states;
  spec.n_actions1 = a1;
  spec.n_actions2 = a2;
  spec.branching = std::min<std::size_t>(2, states);
  spec.gamma = gamma;
  spec.seed = seed;
  return tbrvi::generate_game(spec);
}

std::string fixture_path() { return std::string(TBRVI_SOURCE_DIR) + "/configs/games/two_state.zsg"; }

tbrvi::ExperimentConfig convergence_config(std::uint64_t seed) {
  tbrvi::ExperimentConfig c;
  c.T = 50;
  c.K = 2000;
  c.eta = 20.0;
  c.schedule = tbrvi::StepSchedule{10.0, 100.0, 0.1};
  c.seed = seed;
  c.eval_every = 1;
  return c;
}

// ---- criteria -----------------------------------------------------------------

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(101);
  double worst = 0.0, worst_sum = 0.0;
  for (const int n : {2, 3})
    for (int k = 0; k < 200; ++k) {
      const Vector q = random_vec(rng, n, -1.0, 1.0);
      const double eta = uniform(rng, 0.5, 5.0);
      const Vector w = tbrvi::tsallis_response(q, eta);
      worst = std::max(worst, (w - grid_argmax(q, eta, 1e-3)).cwiseAbs().maxCoeff());
      worst_sum = std::max(worst_sum, std::abs(w.sum() - 1.0));
    }
  const double secs = seconds_since(t0);
  report(1, worst <= 2e-3 && worst_sum <= 1e-10 && secs < 5.0,
         "tsallis vs grid oracle: max coord err " + fmt("%.3g", worst) + ", max |sum-1| " +
             fmt("%.3g", worst_sum) + ", " + fmt("%.2f", secs) + " s");
}

void criterion2() {
  Rng rng(102);
  int violations = 0;
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto n = static_cast<Eigen::Index>(2 + k % 9);
    const Vector q = random_vec(rng, n, -10.0, 10.0);
    const double eta = std::exp(uniform(rng, std::log(0.01), std::log(100.0)));
    const double x = normalization_root(q, eta);
    const double lo = q.maxCoeff() + 2.0 / eta;
    const double hi = q.maxCoeff() + 2.0 * std::sqrt(double(n)) / eta;
    const double slack = 1e-12 * std::max(1.0, std::abs(x));
    if (x < lo - slack || x > hi + slack) ++violations;
    worst = std::max(worst, std::abs(tbrvi::tsallis_response_detail(q, tbrvi::SmoothingParams{eta}).root - x) /
                                std::max(1.0, std::abs(x)));
  }
  report(2, violations == 0 && worst <= 1e-10,
         "root outside bracket: " + std::to_string(violations) + "/1000, library root rel err " +
             fmt("%.3g", worst));
}

void criterion3() {
  Rng rng(103);
  int violations = 0, trials = 0;
  std::ostringstream cells;
  for (const int n : {2, 4, 8})
    for (const double eta : {1.0, 10.0})
      for (const double gamma : {0.5, 0.9}) {
        const double b = 1.0 / (1.0 - gamma);
        const double floor = 1.0 / std::pow(std::sqrt(double(n)) + eta / (2.0 * (1.0 - gamma)), 2);
        int cell = 0;
        for (int k = 0; k < 1000; ++k, ++trials) {
          const Vector w = tbrvi::tsallis_response(random_vec(rng, n, -b, b), eta);
          if (w.minCoeff() < floor - 1e-12) ++cell;
        }
        violations += cell;
        if (cell) cells << " (n=" << n << ",eta=" << eta << ",gamma=" << gamma << "):" << cell;
      }
  report(3, violations == 0,
         "weights below l_eta - 1e-12: " + std::to_string(violations) + "/" + std::to_string(trials) +
             (violations ? "; by cell" + cells.str() : std::string()));
}

void criterion4() {
  Rng rng(104);
  int violations = 0;
  double worst_ratio = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto n = static_cast<Eigen::Index>(2 + k % 7);
    const double eta = std::exp(uniform(rng, std::log(0.1), std::log(20.0)));
    const Vector q = random_vec(rng, n, -5.0, 5.0);
    const double scale = k % 2 ? 1e-3 : 2.0;
    const Vector q2 = q + random_vec(rng, n, -scale, scale);
    const double lhs = (tbrvi::tsallis_response(q, eta) - tbrvi::tsallis_response(q2, eta)).norm();
    const double bound = 2.0 * std::sqrt(2.0) * eta * double(n) * (q - q2).norm();
    if (lhs > bound) ++violations;
    worst_ratio = std::max(worst_ratio, lhs / bound);
  }
  report(4, violations == 0,
         "Lipschitz violations: " + std::to_string(violations) + "/1000, max ratio " +
             fmt("%.3g", worst_ratio));
}

void criterion5() {
  const MarkovGame g = random_game(3, 2, 3, 0.8, 2024);
  tbrvi::ExperimentConfig c;
  c.T = 20;
  c.K = 500;
  c.eta = 5.0;
  c.seed = 5;
  std::string detail;
  bool pass = true;
  try {
    const auto res = tbrvi::run(g, c);
    const double b = 1.0 / (1.0 - g.gamma());
    const double qmax = std::max(res.state.q1.cwiseAbs().maxCoeff(), res.state.q2.cwiseAbs().maxCoeff());
    const double vmax = std::max(res.state.v1.cwiseAbs().maxCoeff(), res.state.v2.cwiseAbs().maxCoeff());
    pass = qmax <= b + 1e-12 && vmax <= b + 1e-12;
    detail = "completed, final |q| " + fmt("%.4g", qmax) + ", |v| " + fmt("%.4g", vmax) +
             ", bound " + fmt("%.4g", b);
  } catch (const tbrvi::InvariantViolation& e) {
    pass = false;
    detail = std::string("runtime assertion: ") + e.what();
  }
  report(5, pass, detail);
}

void criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  Matrix mp(2, 2);
  mp << 1, -1, -1, 1;
  const auto sol = tbrvi::matrix_game_value(mp);
  const double strat_err = std::max((sol.row_strategy.array() - 0.5).abs().maxCoeff(),
                                    (sol.col_strategy.array() - 0.5).abs().maxCoeff());
  bool pass = std::abs(sol.value) <= 1e-8 && strat_err <= 1e-6;
  double worst_res = 0.0, worst_anti = 0.0, worst_gap = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const MarkovGame g = random_game(3, 2, 3, 0.9, 600 + seed);
    const auto eq = tbrvi::shapley_equilibrium(g);
    for (const auto& [p, v] : {std::pair{Player::kFirst, eq.first.v_star},
                               std::pair{Player::kSecond, eq.second.v_star}})
      for (std::size_t s = 0; s < 3; ++s)
        worst_res = std::max(worst_res, std::abs(value_small(stage(g, v, s, p)) - v[s]));
    worst_anti = std::max(worst_anti, (eq.first.v_star + eq.second.v_star).cwiseAbs().maxCoeff());
    worst_gap = std::max(worst_gap, gap(g, eq.policy));
  }
  const double secs = seconds_since(t0);
  pass = pass && worst_res <= 1e-9 && worst_anti <= 2e-9 && worst_gap <= 1e-4 && secs < 10.0;
  report(6, pass,
         "pennies value " + fmt("%.3g", sol.value) + " strategy err " + fmt("%.3g", strat_err) +
             "; Shapley residual " + fmt("%.3g", worst_res) + ", anti-symmetry " +
             fmt("%.3g", worst_anti) + ", equilibrium gap " + fmt("%.3g", worst_gap) + ", " +
             fmt("%.2f", secs) + " s");
}

void criteria7and8() {
  const MarkovGame g = tbrvi::load_game(fixture_path());
  const auto uniform = tbrvi::JointPolicy::uniform(g);

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> final_gap, v_first, v_last;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto res = tbrvi::run(g, convergence_config(seed));
    final_gap.push_back(gap(g, res.policy));
    v_first.push_back(res.trace.rows.at(1).v_sum_inf);
    v_last.push_back(res.trace.rows.back().v_sum_inf);
  }
  const double secs = seconds_since(t0);
  const double gap0 = gap(g, uniform);
  const double gap_t = median(final_gap);
  const double v1 = median(v_first), vT = median(v_last);
  const bool gap_ok = gap_t <= 0.5 * gap0;
  const bool v_ok = vT <= v1;
  report(7, gap_ok && v_ok && secs < 90.0,
         "median Nash gap " + fmt("%.4g", gap0) + " -> " + fmt("%.4g", gap_t) +
             (gap_ok ? " (ok)" : " (not halved)") + "; median |v1+v2| t=1 " + fmt("%.4g", v1) +
             ", t=50 " + fmt("%.4g", vT) + (v_ok ? " (ok)" : " (increased)") + ", " +
             fmt("%.1f", secs) + " s");

  std::vector<double> br_final;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto c = convergence_config(seed);
    c.mode = tbrvi::Mode::kFixedOpponent;
    c.learner = Player::kFirst;
    c.opponent_policy = uniform;
    const auto res = tbrvi::run(g, c);
    br_final.push_back(advantage(g, res.policy, Player::kFirst));
  }
  const double br0 = advantage(g, uniform, Player::kFirst);
  const double brT = median(br_final);
  report(8, brT <= 0.5 * br0,
         "median best-response gap vs uniform opponent " + fmt("%.4g", br0) + " -> " + fmt("%.4g", brT));
}

void criterion9() {
  Matrix lazy(2, 2);
  lazy << 0.75, 0.25, 0.25, 0.75;
  const auto t = tbrvi::mixing_time(lazy, Vector::Constant(2, 0.5), 0.1);
  // Closed form: TV after k steps is 0.5^k / 2.
  std::size_t expected = 0;
  while (0.5 * std::pow(0.5, double(expected)) > 0.1) ++expected;
  Matrix perm(2, 2);
  perm << 0, 1, 1, 0;
  const auto rb_perm = tbrvi::compute_r_b(perm);
  int finite = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const MarkovGame g = random_game(2 + seed % 5, 2, 2, 0.9, seed);
    const Matrix chain = tbrvi::induced_chain(g, tbrvi::JointPolicy::uniform(g));
    // Independent positivity check of some power of the chain.
    Matrix power = Matrix::Identity(chain.rows(), chain.cols());
    bool positive = false;
    for (std::size_t k = 0; k <= 10 * g.n_states() * g.n_states() && !positive; ++k) {
      positive = (power.array() > 0.0).all();
      power = power * chain;
    }
    if (positive && tbrvi::compute_r_b(chain).finite()) ++finite;
  }
  const bool pass = t.finite() && t.value == 3 && expected == 3 && !rb_perm.finite() && finite == 20;
  report(9, pass,
         "lazy mixing time " + t.to_string() + " (closed form " + std::to_string(expected) +
             "); permutation r_b " + rb_perm.to_string() + "; generated r_b finite " +
             std::to_string(finite) + "/20");
}

void criterion10() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "tbrvi_acceptance_c10";
  fs::remove_all(root);
  std::vector<std::string> csv;
  for (const char* sub : {"a", "b"}) {
    tbrvi::RunSpec spec;
    spec.game.path = fixture_path();
    spec.config = convergence_config(1);
    spec.output.directory = (root / sub).string();
    const auto art = tbrvi::run_experiment(spec);
    std::ifstream in(art.trace_path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    csv.push_back(os.str());
  }
  fs::remove_all(root);
  report(10, !csv[0].empty() && csv[0] == csv[1],
         "two seed-1 trace files, " + std::to_string(csv[0].size()) + " bytes, " +
             (csv[0] == csv[1] ? "identical" : "different"));
}

}  // namespace

int main() {
  const std::vector<std::pair<std::vector<int>, std::function<void()>>> all = {
      {{1}, criterion1}, {{2}, criterion2},      {{3}, criterion3},
      {{4}, criterion4}, {{5}, criterion5},      {{6}, criterion6},
      {{7, 8}, criteria7and8}, {{9}, criterion9}, {{10}, criterion10}};
  for (const auto& [ids, f] : all) {
    try {
      f();
    } catch (const std::exception& e) {
      for (const int id : ids) report(id, false, std::string("exception: ") + e.what());
    }
  }
  std::printf("%d criterion failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
