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

#ifndef TBRVI_SCHEDULE_HPP_
#define TBRVI_SCHEDULE_HPP_

#include <cstddef>
#include <stdexcept>
#include <utility>

namespace tbrvi {

// alpha_k = alpha / (k + h) for the q-tables and beta_k = c_ab * alpha_k for
// the policies: one time scale, policies slower by a constant factor.
struct StepSchedule {
  double alpha = 10.0;
  double h = 100.0;
  double c_ab = 0.1;

  void validate() const {
    if (!(alpha > 0.0) || !(h > 0.0) || !(c_ab > 0.0)) {
      throw std::invalid_argument("StepSchedule: alpha, h and c_ab must be positive");
    }
    if (!(alpha / h < 1.0)) {
      throw std::invalid_argument("StepSchedule: alpha/h must be below 1");
    }
  }

  friend bool operator==(const StepSchedule&, const StepSchedule&) = default;
};

struct StepSizes {
  double alpha;
  double beta;
};

inline StepSizes step_sizes(std::size_t k, const StepSchedule& schedule) {
  const double a = schedule.alpha / (static_cast<double>(k) + schedule.h);
  return {a, schedule.c_ab * a};
}

}  // namespace tbrvi

#endif  // TBRVI_SCHEDULE_HPP_
