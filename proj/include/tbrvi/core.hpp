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

#ifndef TBRVI_CORE_HPP_
#define TBRVI_CORE_HPP_

// Shared vocabulary: dense tables, players, the run RNG and sampling helpers.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace tbrvi {

inline constexpr const char* kLibraryVersion = "0.1.0";

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// A probability vector. Invariant (checked by is_distribution): entries >= 0
// and the sum is 1 up to the caller's tolerance.
using Distribution = Eigen::VectorXd;

enum class Player : int { kFirst = 0, kSecond = 1 };

inline constexpr Player opponent(Player p) {
  return p == Player::kFirst ? Player::kSecond : Player::kFirst;
}

inline constexpr int player_number(Player p) {
  return p == Player::kFirst ? 1 : 2;
}

// One seedable deterministic stream per run.
using Rng = std::mt19937_64;
inline constexpr const char* kRngAlgorithm = "mt19937_64";

// Exactly one engine draw, mapped to [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Inverse-CDF draw from a row of probabilities; consumes one engine draw.
// Rounding slack at the top end falls back to the last index with mass.
template <typename Row>
std::size_t sample_categorical(const Row& probs, Rng& rng) {
  const double u = uniform01(rng);
  const auto n = static_cast<std::size_t>(probs.size());
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = probs[static_cast<Eigen::Index>(i)];
    if (p > 0.0) last_positive = i;
    acc += p;
    if (u < acc) return i;
  }
  return last_positive;
}

inline bool is_distribution(const Eigen::Ref<const Vector>& w,
                            double tol = 1e-10) {
  if (w.size() == 0) return false;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (!(w[i] >= 0.0) || !std::isfinite(w[i])) return false;
  }
  return std::abs(w.sum() - 1.0) <= tol;
}

// Largest absolute entry of a vector or matrix expression; 0 when empty.
template <typename Derived>
double sup_norm(const Eigen::MatrixBase<Derived>& x) {
  return x.size() == 0 ? 0.0 : x.derived().cwiseAbs().maxCoeff();
}

// An iteration count that may have hit its cap without reaching its target.
struct StepCount {
  std::size_t value = 0;
  bool saturated = false;

  static StepCount reached(std::size_t k) { return {k, false}; }
  static StepCount saturated_at(std::size_t k_max) { return {k_max, true}; }
  bool finite() const { return !saturated; }
  std::string to_string() const {
    return saturated ? "Saturated(" + std::to_string(value) + ")"
                     : std::to_string(value);
  }
  friend bool operator==(const StepCount&, const StepCount&) = default;
};

// Raised when an always-on runtime invariant fails.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace tbrvi

#endif  // TBRVI_CORE_HPP_
