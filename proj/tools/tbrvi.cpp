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


// tbrvi command line: run, solve, diag, verify, sweep.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "tbrvi.hpp"

namespace {

using tbrvi::detail::format_double;

std::vector<std::uint64_t> parse_seeds(const std::string& list) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(list);
  for (std::string tok; std::getline(ss, tok, ',');) {
    if (tok.empty()) continue;
    std::size_t used = 0;
    const auto v = std::stoull(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("bad seed '" + tok + "'");
    seeds.push_back(v);
  }
  if (seeds.empty()) throw std::invalid_argument("no seeds given");
  return seeds;
}

std::string vector_text(const tbrvi::Vector& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += format_double(v[i]);
  }
  return out;
}

int cmd_run(const std::string& config_path) {
  const tbrvi::RunSpec spec = tbrvi::load_config(config_path);
  const auto art = tbrvi::run_experiment(spec);
  const auto& rows = art.result.trace.rows;
  std::cout << "trace     " << art.trace_path.string() << '\n'
            << "manifest  " << art.manifest_path.string() << '\n'
            << "policy    " << art.policy_path.string() << '\n';
  if (!rows.empty()) {
    std::cout << "nash_gap  t=0 " << format_double(rows.front().nash_gap) << "  t="
              << rows.back().t << ' ' << format_double(rows.back().nash_gap) << '\n';
  }
  return 0;
}

int cmd_solve(const std::string& game_path, double tol, bool certificates) {
  const tbrvi::MarkovGame game = tbrvi::load_game(game_path);
  const auto eq = tbrvi::shapley_equilibrium(game, tol);
  std::cout << "state,v_star_1,v_star_2\n";
  for (std::size_t s = 0; s < game.n_states(); ++s) {
    const auto i = static_cast<Eigen::Index>(s);
    std::cout << s << ',' << format_double(eq.first.v_star[i]) << ','
              << format_double(eq.second.v_star[i]) << '\n';
  }
  std::cout << "\nquantity,value\n"
            << "residual_1," << format_double(eq.first.residual) << '\n'
            << "residual_2," << format_double(eq.second.residual) << '\n'
            << "anti_symmetry," << format_double(eq.anti_symmetry) << '\n'
            << "iterations_1," << eq.first.iterations << '\n'
            << "iterations_2," << eq.second.iterations << '\n'
            << "nash_gap," << format_double(tbrvi::nash_gap(game, eq.policy, tol).gap) << '\n'
            << "tol," << format_double(tol) << '\n';
  if (certificates) {
    for (std::size_t s = 0; s < game.n_states(); ++s) {
      const auto& st = eq.first.stage[s];
      std::cout << "\n# state " << s << " stage game (player 1 rows)\n"
                << "value " << format_double(st.value) << '\n'
                << "row_strategy " << vector_text(st.row_strategy) << '\n'
                << "col_strategy " << vector_text(st.col_strategy) << '\n'
                << "certificate_gap " << format_double(st.certificate_gap) << '\n';
    }
  }
  std::cout << '\n' << tbrvi::format_policy(eq.policy);
  return 0;
}

int cmd_diag(const std::string& game_path, const std::string& policy_path,
             std::optional<double> eta, bool csv) {
  const tbrvi::MarkovGame game = tbrvi::load_game(game_path);
  const tbrvi::JointPolicy pi = policy_path.empty() ? tbrvi::JointPolicy::uniform(game)
                                                    : tbrvi::load_policy(policy_path);
  tbrvi::check_policy_shape(game, pi);
  const auto chain = tbrvi::analyze_chain(tbrvi::induced_chain(game, pi));
  const auto a3 = tbrvi::check_assumption3(game, pi);

  std::vector<std::pair<std::string, std::string>> rows;
  rows.emplace_back("r_b", chain.r_b.to_string());
  rows.emplace_back("irreducible_aperiodic", chain.irreducible_aperiodic ? "true" : "false");
  rows.emplace_back("mixing_time_0.25", chain.mixing_time.to_string());
  if (chain.stationary) {
    rows.emplace_back("stationary", vector_text(*chain.stationary));
    rows.emplace_back("min_stationary", format_double(chain.min_stationary));
    rows.emplace_back("reachability",
                      format_double(tbrvi::reachability_constant(*chain.stationary)));
  } else {
    rows.emplace_back("stationary", "none: " + chain.note);
  }
  if (a3.holds) rows.emplace_back("rho_b_estimate", format_double(a3.rho_b_estimate));
  rows.emplace_back("policy_margin", format_double(tbrvi::policy_margin(pi)));
  rows.emplace_back("nash_gap", format_double(tbrvi::nash_gap(game, pi).gap));
  if (eta) {
    const auto th = tbrvi::theory_constants(game, *eta, pi, tbrvi::StepSchedule{}, 10000);
    rows.emplace_back("ell_eta", format_double(th.ell_eta));
    rows.emplace_back("c_eta_ell_squared", format_double(th.c_eta_margin_sq));
    rows.emplace_back("c_eta_mu_ell_squared", format_double(th.c_eta_stationary));
    rows.emplace_back("c_ab_bound_ell_squared", format_double(th.c_ab_bound_margin_sq));
    rows.emplace_back("c_ab_bound_mu_ell_squared", format_double(th.c_ab_bound_stationary));
    rows.emplace_back("mu_floor_per_rb", format_double(th.mu_floor_per_rb));
    rows.emplace_back("mu_floor_per_step", format_double(th.mu_floor_per_step));
    rows.emplace_back("k0", th.k0 ? std::to_string(*th.k0) : std::string("none"));
    for (const auto& z : th.z_table)
      rows.emplace_back("z_k[" + std::to_string(z.k) + "]",
                        format_double(z.z_k) + " (beta " + format_double(z.beta_k) +
                            ", t_b " + z.benchmark_mixing.to_string() + ")");
    rows.emplace_back("feasible_default_schedule", th.feasible ? "true" : "false");
    for (const auto& r : th.reasons) rows.emplace_back("infeasible_because", r);
  }

  if (csv) {
    std::cout << "quantity,value\n";
    for (const auto& [k, v] : rows) std::cout << k << ",\"" << v << "\"\n";
  } else {
    std::size_t width = 0;
    for (const auto& r : rows) width = std::max(width, r.first.size());
    for (const auto& [k, v] : rows)
      std::cout << k << std::string(width + 2 - k.size(), ' ') << v << '\n';
  }
  return 0;
}

int cmd_verify(const std::string& suite, const tbrvi::VerifyOptions& opt) {
  const auto results = tbrvi::run_verify(suite, opt);
  std::cout << tbrvi::format_verify_report(results);
  return tbrvi::all_passed(results) ? 0 : 1;
}

int cmd_sweep(const std::string& config_path, const std::string& seeds, std::size_t jobs) {
  const tbrvi::RunSpec spec = tbrvi::load_config(config_path);
  const auto outcomes = tbrvi::run_sweep(spec, parse_seeds(seeds), jobs);
  int status = 0;
  for (const auto& o : outcomes) {
    if (o.error.empty()) {
      std::cout << "seed " << o.seed << ' ' << o.trace_path.string() << '\n';
    } else {
      std::cout << "seed " << o.seed << " FAILED " << o.error << '\n';
      status = 1;
    }
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tsallis-smoothed best-response learning in zero-sum Markov games"};
  app.set_version_flag("--version", std::string(tbrvi::kLibraryVersion));
  app.require_subcommand(1);

  std::string config_path, game_path, policy_path, suite = "all", seeds;
  double tol = tbrvi::kDefaultOracleTol;
  std::optional<double> eta;
  bool uniform = false;
  std::size_t jobs = 1;
  tbrvi::VerifyOptions vopt;

  auto* run = app.add_subcommand("run", "run one experiment from a config file");
  run->add_option("-c,--config", config_path, "config file")->required()->check(CLI::ExistingFile);

  auto* solve = app.add_subcommand("solve", "Shapley values and an equilibrium of a game file");
  solve->add_option("-g,--game", game_path, "game file")->required()->check(CLI::ExistingFile);
  solve->add_option("--tol", tol, "value tolerance")->check(CLI::PositiveNumber);
  bool certificates = false;
  solve->add_flag("--certificates", certificates, "print each stage game's certificate");

  auto* diag = app.add_subcommand("diag", "chain diagnostics for a policy");
  diag->add_option("-g,--game", game_path, "game file")->required()->check(CLI::ExistingFile);
  auto* pol = diag->add_option("--policy", policy_path, "policy file")->check(CLI::ExistingFile);
  auto* uni = diag->add_flag("--uniform", uniform, "use the uniform policy (default)");
  pol->excludes(uni);
  diag->add_option("--eta", eta, "also report the guarantee's constants for this eta");
  bool csv = false;
  diag->add_flag("--csv", csv, "print CSV instead of aligned text");

  auto* verify = app.add_subcommand("verify", "run property suites");
  verify->add_option("suite", suite, "tsallis, learner, oracle, chain or all")
      ->check(CLI::IsMember({"all", "tsallis", "learner", "oracle", "chain"}));
  verify->add_option("--seed", vopt.seed, "base seed");
  verify->add_option("--lipschitz-scale", vopt.lipschitz_scale,
                     "scale applied to the Lipschitz constant under test");

  auto* sweep = app.add_subcommand("sweep", "run one config over several seeds");
  sweep->add_option("-c,--config", config_path, "config file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--seeds", seeds, "comma-separated seeds")->required();
  sweep->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(config_path);
    if (*solve) return cmd_solve(game_path, tol, certificates);
    if (*diag) return cmd_diag(game_path, policy_path, eta, csv);
    if (*verify) return cmd_verify(suite, vopt);
    if (*sweep) return cmd_sweep(config_path, seeds, jobs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
