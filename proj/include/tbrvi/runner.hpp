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

#ifndef TBRVI_RUNNER_HPP_
#define TBRVI_RUNNER_HPP_

// Experiment orchestration: one run writes
//
//   <dir>/<stem>.csv            trace
//   <dir>/<stem>.manifest.json  config echo, seed, rng, game hash, version
//   <dir>/<stem>.policy         final joint policy
//
// where <stem> is the trace name without its extension. Relative output
// directories resolve against $TBRVI_OUTPUT_ROOT when it is set.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "tbrvi/config.hpp"
#include "tbrvi/core.hpp"
#include "tbrvi/game.hpp"
#include "tbrvi/io.hpp"
#include "tbrvi/learner.hpp"

namespace tbrvi {

inline constexpr const char* kOutputRootVariable = "TBRVI_OUTPUT_ROOT";

inline std::filesystem::path output_directory(const OutputSpec& out) {
  const std::filesystem::path dir(out.directory);
  if (dir.is_absolute()) return dir;
  if (const char* root = std::getenv(kOutputRootVariable); root && *root)
    return std::filesystem::path(root) / dir;
  return dir;
}

inline std::string trace_stem(const std::string& trace_name) {
  return std::filesystem::path(trace_name).stem().string();
}

inline MarkovGame materialize_game(const GameSource& src) {
  if (src.path) return load_game(*src.path);
  return generate_game(*src.generator);
}

// ---- manifest --------------------------------------------------------------

inline nlohmann::json spec_to_json(const RunSpec& spec) {
  const ExperimentConfig& c = spec.config;
  nlohmann::json game;
  if (spec.game.path) {
    game["path"] = *spec.game.path;
  } else {
    const GeneratorSpec& g = *spec.game.generator;
    game["states"] = g.n_states;
    game["actions1"] = g.n_actions1;
    game["actions2"] = g.n_actions2;
    game["branching"] = g.branching;
    game["gamma"] = g.gamma;
    game["seed"] = g.seed;
  }
  nlohmann::json learner = {
      {"T", c.T},
      {"K", c.K},
      {"eta", c.eta},
      {"alpha", c.schedule.alpha},
      {"h", c.schedule.h},
      {"c_ab", c.schedule.c_ab},
      {"mode", mode_name(c.mode)},
      {"learner_player", player_number(c.learner)},
      {"theory_strict", c.theory_strict},
  };
  if (spec.opponent_policy_path) learner["opponent_policy"] = *spec.opponent_policy_path;
  return {
      {"game", game},
      {"learner", learner},
      {"eval", {{"eval_every", c.eval_every}, {"oracle_tol", c.oracle_tol}}},
      {"output",
       {{"directory", spec.output.directory},
        {"trace_name", spec.output.trace_name},
        {"wallclock", spec.output.wallclock}}},
      {"seed", {{"value", c.seed}}},
  };
}

inline RunSpec spec_from_json(const nlohmann::json& j) {
  RunSpec spec;
  ExperimentConfig& c = spec.config;
  const auto& game = j.at("game");
  if (game.contains("path")) {
    spec.game.path = game.at("path").get<std::string>();
  } else {
    GeneratorSpec g;
    g.n_states = game.at("states").get<std::size_t>();
    g.n_actions1 = game.at("actions1").get<std::size_t>();
    g.n_actions2 = game.at("actions2").get<std::size_t>();
    g.branching = game.at("branching").get<std::size_t>();
    g.gamma = game.at("gamma").get<double>();
    g.seed = game.at("seed").get<std::uint64_t>();
    spec.game.generator = g;
  }
  const auto& l = j.at("learner");
  c.T = l.at("T").get<std::size_t>();
  c.K = l.at("K").get<std::size_t>();
  c.eta = l.at("eta").get<double>();
  c.schedule.alpha = l.at("alpha").get<double>();
  c.schedule.h = l.at("h").get<double>();
  c.schedule.c_ab = l.at("c_ab").get<double>();
  const auto mode = l.at("mode").get<std::string>();
  if (mode == "self-play") {
    c.mode = Mode::kSelfPlay;
  } else if (mode == "fixed-opponent") {
    c.mode = Mode::kFixedOpponent;
  } else {
    throw std::invalid_argument("manifest: unknown mode " + mode);
  }
  c.learner = l.at("learner_player").get<int>() == 2 ? Player::kSecond : Player::kFirst;
  c.theory_strict = l.at("theory_strict").get<bool>();
  if (l.contains("opponent_policy"))
    spec.opponent_policy_path = l.at("opponent_policy").get<std::string>();
  c.eval_every = j.at("eval").at("eval_every").get<std::size_t>();
  c.oracle_tol = j.at("eval").at("oracle_tol").get<double>();
  const auto& o = j.at("output");
  spec.output.directory = o.at("directory").get<std::string>();
  spec.output.trace_name = o.at("trace_name").get<std::string>();
  spec.output.wallclock = o.at("wallclock").get<bool>();
  c.record_wallclock = spec.output.wallclock;
  c.seed = j.at("seed").at("value").get<std::uint64_t>();
  return spec;
}

inline nlohmann::json make_manifest(const RunSpec& spec, const MarkovGame& game,
                                    const RunResult& result) {
  nlohmann::json m;
  m["config"] = spec_to_json(spec);
  m["seed"] = spec.config.seed;
  m["rng"] = kRngAlgorithm;
  m["game_hash"] = hex64(fnv1a64(format_game(game)));
  m["version"] = kLibraryVersion;
  m["trace_rows"] = result.trace.rows.size();
  nlohmann::json notes = nlohmann::json::array();
  for (const auto& r : result.trace.rows)
    if (!r.note.empty()) notes.push_back({{"t", r.t}, {"note", r.note}});
  m["evaluation_notes"] = notes;
  if (result.theory) {
    const TheoryReport& th = *result.theory;
    m["theory"] = {{"ell_eta", th.ell_eta},
                   {"c_ab_bound_margin_sq", th.c_ab_bound_margin_sq},
                   {"c_ab_bound_stationary", th.c_ab_bound_stationary},
                   {"feasible", th.feasible}};
  }
  return m;
}

// Recovers the effective config from a manifest written by run_experiment.
inline RunSpec parse_manifest(const std::string& text) {
  return spec_from_json(nlohmann::json::parse(text).at("config"));
}

// ---- runs ------------------------------------------------------------------

struct RunArtifacts {
  std::filesystem::path trace_path;
  std::filesystem::path manifest_path;
  std::filesystem::path policy_path;
  RunResult result;
};

inline RunArtifacts run_experiment(const RunSpec& spec) {
  const MarkovGame game = materialize_game(spec.game);
  ExperimentConfig config = spec.config;
  config.record_wallclock = spec.output.wallclock;
  if (spec.opponent_policy_path) config.opponent_policy = load_policy(*spec.opponent_policy_path);

  RunArtifacts art;
  art.result = run(game, config);

  const std::filesystem::path dir = output_directory(spec.output);
  std::filesystem::create_directories(dir);
  const std::string stem = trace_stem(spec.output.trace_name);
  art.trace_path = dir / spec.output.trace_name;
  art.manifest_path = dir / (stem + ".manifest.json");
  art.policy_path = dir / (stem + ".policy");
  detail::write_file(art.trace_path.string(), format_trace_csv(art.result.trace));
  detail::write_file(art.manifest_path.string(),
                     make_manifest(spec, game, art.result).dump(2) + "\n");
  detail::write_file(art.policy_path.string(), format_policy(art.result.policy));
  return art;
}

struct SweepOutcome {
  std::uint64_t seed = 0;
  std::filesystem::path trace_path;
  // Empty on success.
  std::string error;
};

// The spec for one sweep member: same config, given seed, trace file
// suffixed with the seed.
inline RunSpec sweep_member(const RunSpec& base, std::uint64_t seed) {
  RunSpec s = base;
  s.config.seed = seed;
  const std::filesystem::path name(base.output.trace_name);
  s.output.trace_name = name.stem().string() + "_seed" + std::to_string(seed) +
                        (name.has_extension() ? name.extension().string() : ".csv");
  return s;
}

// Runs one experiment per seed on `jobs` worker threads. Each run owns its
// output files; failures are reported per seed.
inline std::vector<SweepOutcome> run_sweep(const RunSpec& base,
                                           const std::vector<std::uint64_t>& seeds,
                                           std::size_t jobs) {
  std::vector<SweepOutcome> out(seeds.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      out[i].seed = seeds[i];
      try {
        out[i].trace_path = run_experiment(sweep_member(base, seeds[i])).trace_path;
      } catch (const std::exception& e) {
        out[i].error = e.what();
      }
    }
  };
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(seeds.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace tbrvi

#endif  // TBRVI_RUNNER_HPP_
