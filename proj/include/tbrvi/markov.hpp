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

#ifndef TBRVI_MARKOV_HPP_
#define TBRVI_MARKOV_HPP_

// Finite Markov chain primitives: stationary distributions, total-variation
// mixing times, the positivity index r_b and the geometric decay rate fit.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "tbrvi/core.hpp"

namespace tbrvi {

class ReducibleChainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require_square(const Matrix& p, const char* what) {
  if (p.rows() != p.cols() || p.rows() == 0) {
    throw std::invalid_argument(std::string(what) +
                                ": expected a non-empty square matrix");
  }
}

// ||mu P - mu||_1.
inline double stationary_residual(const Matrix& p, const Vector& mu) {
  return (p.transpose() * mu - mu).cwiseAbs().sum();
}

// Solves mu (P - I) = 0 with sum(mu) = 1. The system is singular exactly
// when the chain has more than one closed class; that case is reported as
// ReducibleChainError instead of picking one of the stationary measures.
inline Distribution stationary_distribution(const Matrix& p) {
  require_square(p, "stationary_distribution");
  const Eigen::Index n = p.rows();
  if (n == 1) return Distribution::Ones(1);

  Matrix a = p.transpose() - Matrix::Identity(n, n);
  a.row(n - 1).setOnes();
  Vector b = Vector::Zero(n);
  b[n - 1] = 1.0;

  Eigen::FullPivLU<Matrix> lu(a);
  lu.setThreshold(1e-12);
  if (lu.rank() < n) {
    throw ReducibleChainError(
        "stationary_distribution: chain has several closed classes; "
        "stationary distribution is not unique");
  }
  Vector mu = lu.solve(b);
  // One round of iterative refinement.
  mu += lu.solve(b - a * mu);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (mu[i] < 0.0 && mu[i] > -1e-13) mu[i] = 0.0;
  }
  mu /= mu.sum();
  const double res = stationary_residual(p, mu);
  if (!(res <= 1e-12) || mu.minCoeff() < 0.0) {
    throw ReducibleChainError("stationary_distribution: residual " +
                              std::to_string(res) + " above 1e-12");
  }
  return mu;
}

inline double tv_distance(const Eigen::Ref<const Vector>& a,
                          const Eigen::Ref<const Vector>& b) {
  return 0.5 * (a - b).cwiseAbs().sum();
}

// max_s TV(M(s, .), mu).
inline double worst_row_tv(const Matrix& m, const Vector& mu) {
  double worst = 0.0;
  for (Eigen::Index s = 0; s < m.rows(); ++s) {
    worst = std::max(worst, tv_distance(m.row(s).transpose(), mu));
  }
  return worst;
}

// Smallest k <= k_max with max_s TV(P^k(s,.), mu) <= epsilon, by explicit
// powers starting from P^0 = I.
inline StepCount mixing_time(const Matrix& p, const Vector& mu, double epsilon,
                             std::size_t k_max = 10000) {
  require_square(p, "mixing_time");
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("mixing_time: epsilon must be positive");
  }
  Matrix power = Matrix::Identity(p.rows(), p.cols());
  for (std::size_t k = 0; k <= k_max; ++k) {
    if (worst_row_tv(power, mu) <= epsilon) return StepCount::reached(k);
    power = power * p;
  }
  return StepCount::saturated_at(k_max);
}

inline std::size_t default_rb_cap(std::size_t n_states) {
  return 10 * n_states * n_states;
}

// Smallest k with P^k entrywise positive, tracked on boolean supports so
// underflow cannot hide a positive entry. Finite iff the chain is
// irreducible and aperiodic.
inline StepCount compute_r_b(const Matrix& p, std::size_t k_max) {
  require_square(p, "compute_r_b");
  const Eigen::Index n = p.rows();
  using Support = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;
  Support step(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) step(i, j) = p(i, j) > 1e-15;

  Support reach = Support::Identity(n, n);
  for (std::size_t k = 0; k <= k_max; ++k) {
    if (reach.all()) return StepCount::reached(k);
    Support next = Support::Constant(n, n, false);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index m = 0; m < n; ++m) {
        if (!reach(i, m)) continue;
        for (Eigen::Index j = 0; j < n; ++j) next(i, j) = next(i, j) || step(m, j);
      }
    reach = std::move(next);
  }
  return StepCount::saturated_at(k_max);
}

inline StepCount compute_r_b(const Matrix& p) {
  return compute_r_b(p, default_rb_cap(static_cast<std::size_t>(p.rows())));
}

// Geometric decay rate of max_s TV(P^k(s,.), mu) over k in
// [first, first + window], by least squares on log TV. Points at roundoff
// level (TV < 1e-13) are dropped; with fewer than two points left the chain
// has already mixed exactly and the rate is 0.
inline double estimate_decay_rate(const Matrix& p, const Vector& mu,
                                  std::size_t first, std::size_t window = 50) {
  require_square(p, "estimate_decay_rate");
  Matrix power = Matrix::Identity(p.rows(), p.cols());
  for (std::size_t k = 0; k < first; ++k) power = power * p;
  std::vector<double> ks, logs;
  for (std::size_t k = first; k <= first + window; ++k) {
    const double tv = worst_row_tv(power, mu);
    if (tv >= 1e-13) {
      ks.push_back(static_cast<double>(k));
      logs.push_back(std::log(tv));
    }
    power = power * p;
  }
  if (ks.size() < 2) return 0.0;
  const double n = static_cast<double>(ks.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    sx += ks[i];
    sy += logs[i];
    sxx += ks[i] * ks[i];
    sxy += ks[i] * logs[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return std::min(1.0, std::exp(slope));
}

}  // namespace tbrvi

#endif  // TBRVI_MARKOV_HPP_
