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


#ifndef TBRVI_TESTS_FIXTURES_HPP_
#define TBRVI_TESTS_FIXTURES_HPP_

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "tbrvi.hpp"

namespace fixtures {

using tbrvi::Matrix;
using tbrvi::MarkovGame;
using tbrvi::Vector;

inline std::string source_path(const std::string& rel) {
  return std::string(TBRVI_SOURCE_DIR) + "/" + rel;
}

// Builds a game from nested tables r[s][a1][a2] and p[s][a1][a2][s'].
inline MarkovGame make_game(
    const std::vector<std::vector<std::vector<double>>>& r,
    const std::vector<std::vector<std::vector<std::vector<double>>>>& p,
    double gamma, std::size_t start = 0) {
  const std::size_t ns = r.size(), n1 = r[0].size(), n2 = r[0][0].size();
  std::vector<double> rew, tr;
  for (std::size_t s = 0; s < ns; ++s)
    for (std::size_t a = 0; a < n1; ++a)
      for (std::size_t b = 0; b < n2; ++b) {
        rew.push_back(r[s][a][b]);
        for (std::size_t t = 0; t < ns; ++t) tr.push_back(p[s][a][b][t]);
      }
  return MarkovGame(ns, n1, n2, tr, rew, gamma, start);
}

inline MarkovGame matching_pennies(double gamma = 0.5) {
  return make_game({{{1, -1}, {-1, 1}}}, {{{{1}, {1}}, {{1}, {1}}}}, gamma);
}

// Single state, every reward equal to c.
inline MarkovGame constant_game(double c, double gamma, std::size_t n1 = 2,
                                std::size_t n2 = 2) {
  std::vector<double> rew(n1 * n2, c), tr(n1 * n2, 1.0);
  return MarkovGame(1, n1, n2, tr, rew, gamma, 0);
}

// Two-state matching pennies: player 1 wins on a match; a match moves the
// game to state 1, a mismatch to state 0. State 1 pays half as much.
inline MarkovGame two_state_pennies(double gamma = 0.7) {
  return make_game({{{1, -1}, {-1, 1}}, {{0.5, -0.5}, {-0.5, 0.5}}},
                   {{{{0, 1}, {1, 0}}, {{1, 0}, {0, 1}}},
                    {{{0, 1}, {1, 0}}, {{1, 0}, {0, 1}}}},
                   gamma);
}

// The checked-in two-state fixture.
inline MarkovGame two_state_fixture() {
  return tbrvi::load_game(source_path("configs/games/two_state.zsg"));
}

inline tbrvi::GeneratorSpec generator(std::size_t states, std::size_t a1, std::size_t a2,
                                      double gamma, std::uint64_t seed) {
  tbrvi::GeneratorSpec g;
  g.n_states = states;
  g.n_actions1 = a1;
  g.n_actions2 = a2;
  g.branching = std::min<std::size_t>(2, states);
  g.gamma = gamma;
  g.seed = seed;
  return g;
}

inline tbrvi::JointPolicy random_policy(const MarkovGame& game, tbrvi::Rng& rng) {
  tbrvi::JointPolicy pi = tbrvi::JointPolicy::uniform(game);
  for (Eigen::Index s = 0; s < pi.pi1.rows(); ++s) {
    pi.pi1.row(s) = tbrvi::detail::random_simplex(rng, pi.pi1.cols()).transpose();
    pi.pi2.row(s) = tbrvi::detail::random_simplex(rng, pi.pi2.cols()).transpose();
  }
  return pi;
}

inline Vector random_vector(tbrvi::Rng& rng, Eigen::Index n, double lo, double hi) {
  return tbrvi::detail::random_vector(rng, n, lo, hi);
}

}  // namespace fixtures

#endif  // TBRVI_TESTS_FIXTURES_HPP_
