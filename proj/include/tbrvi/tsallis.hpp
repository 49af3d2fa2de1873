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

#ifndef TBRVI_TSALLIS_HPP_
#define TBRVI_TSALLIS_HPP_

// Regularized responses over the simplex.
//
// The Tsallis-1/2 response to a payoff vector q is
//
//   sigma(q) = argmax_{w in simplex} <w, q> + (1/eta) H(w),
//   H(w)     = 4 * sum_i sqrt(w_i),
//
// with closed form w_i = 4 / (eta (q_i - x))^2, where x is the unique root of
//
//   g(x) = sum_i 4 / (eta (q_i - x))^2 = 1
//
// lying above max_i q_i. On [max q + 2/eta, max q + 2 sqrt(n)/eta] g is
// strictly decreasing with g(lo) >= 1 >= g(hi), so bisection on that bracket
// always converges to the right root; the n other roots of g = 1 sit below
// max q and are never visited.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

#include "tbrvi/core.hpp"

namespace tbrvi {

struct SmoothingParams {
  double eta = 1.0;
  // Bisection stops once the bracket is narrower than
  // bisection_tol * max(1, |x|).
  double bisection_tol = 1e-13;
  int max_iter = 200;
};

class BisectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double tsallis_entropy(const Eigen::Ref<const Vector>& w) {
  return 4.0 * w.cwiseMax(0.0).cwiseSqrt().sum();
}

// g(x) - 1 for the normalization equation.
inline double normalization_excess(const Eigen::Ref<const Vector>& q,
                                   double eta, double x) {
  double g = 0.0;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    const double d = eta * (q[i] - x);
    g += 4.0 / (d * d);
  }
  return g - 1.0;
}

inline std::pair<double, double> normalization_bracket(
    const Eigen::Ref<const Vector>& q, double eta) {
  const double top = q.maxCoeff();
  const double n = static_cast<double>(q.size());
  return {top + 2.0 / eta, top + 2.0 * std::sqrt(n) / eta};
}

struct TsallisResult {
  Distribution weights;
  double root = 0.0;
  int iterations = 0;
};

inline TsallisResult tsallis_response_detail(const Eigen::Ref<const Vector>& q,
                                             const SmoothingParams& params) {
  if (q.size() == 0) throw std::invalid_argument("tsallis_response: empty q");
  if (!(params.eta > 0.0)) {
    throw std::invalid_argument("tsallis_response: eta must be positive");
  }
  if (!q.allFinite()) throw std::invalid_argument("tsallis_response: q not finite");

  auto [lo, hi] = normalization_bracket(q, params.eta);
  int it = 0;
  if (q.size() > 1) {
    while (hi - lo > params.bisection_tol * std::max(1.0, std::abs(lo))) {
      if (it == params.max_iter) {
        const double mid = 0.5 * (lo + hi);
        throw BisectionError(
            "tsallis_response: no convergence after " +
            std::to_string(params.max_iter) + " iterations, residual " +
            std::to_string(normalization_excess(q, params.eta, mid)));
      }
      const double mid = 0.5 * (lo + hi);
      if (normalization_excess(q, params.eta, mid) > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
      ++it;
    }
  }
  const double x = 0.5 * (lo + hi);
  Distribution w(q.size());
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    const double d = params.eta * (q[i] - x);
    w[i] = 4.0 / (d * d);
  }
  w /= w.sum();
  return {std::move(w), x, it};
}

inline Distribution tsallis_response(const Eigen::Ref<const Vector>& q,
                                     const SmoothingParams& params) {
  return tsallis_response_detail(q, params).weights;
}

inline Distribution tsallis_response(const Eigen::Ref<const Vector>& q,
                                     double eta) {
  return tsallis_response(q, SmoothingParams{eta});
}

// <w, q> + (1/eta) H(w), the objective sigma maximizes.
inline double regularized_payoff(const Eigen::Ref<const Vector>& w,
                                 const Eigen::Ref<const Vector>& q,
                                 double eta) {
  return w.dot(q) + tsallis_entropy(w) / eta;
}

// Shannon baseline: w_i proportional to exp(eta q_i), max-shifted.
inline Distribution softmax_response(const Eigen::Ref<const Vector>& q,
                                     double eta) {
  if (q.size() == 0) throw std::invalid_argument("softmax_response: empty q");
  const double top = q.maxCoeff();
  Distribution w = ((q.array() - top) * eta).exp().matrix();
  return w / w.sum();
}

// Lower bound on every coordinate of sigma(q) when
// max_i q_i - min_i q_i <= spread:
//   x - q_i <= spread + 2 sqrt(n)/eta  =>  w_i >= 1/(sqrt(n) + eta*spread/2)^2.
inline double spread_margin_floor(std::size_t n_actions, double eta,
                                  double spread) {
  const double root = std::sqrt(static_cast<double>(n_actions)) + 0.5 * eta * spread;
  return 1.0 / (root * root);
}

// l_eta = 1/(sqrt(A) + eta/(2(1-gamma)))^2, the published margin constant.
// It equals spread_margin_floor(A, eta, 1/(1-gamma)), so it is only
// guaranteed when the spread of q is at most 1/(1-gamma).
inline double margin_floor(std::size_t n_actions, double eta, double gamma) {
  return spread_margin_floor(n_actions, eta, 1.0 / (1.0 - gamma));
}

// Floor valid for every q with ||q||_inf <= 1/(1-gamma) (spread up to
// 2/(1-gamma)).
inline double bounded_q_margin_floor(std::size_t n_actions, double eta,
                                     double gamma) {
  return spread_margin_floor(n_actions, eta, 2.0 / (1.0 - gamma));
}

// The Lipschitz constant 2 sqrt(2) eta n of sigma with respect to ||.||_2.
inline double tsallis_lipschitz_constant(std::size_t n, double eta) {
  return 2.0 * std::sqrt(2.0) * eta * static_cast<double>(n);
}

}  // namespace tbrvi

#endif  // TBRVI_TSALLIS_HPP_
