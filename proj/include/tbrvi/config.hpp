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

#ifndef TBRVI_CONFIG_HPP_
#define TBRVI_CONFIG_HPP_

// Experiment configuration files.
//
//   [game]     path = games/two_state.zsg
//              or: states, actions1, actions2, gamma, seed, [branching]
//   [learner]  T, K, eta, [alpha = 10], [h = 100], [c_ab = 0.1],
//              [mode = self-play | fixed-opponent], [opponent_policy],
//              [learner_player = 1], [theory_strict = false]
//   [eval]     [eval_every = 1], [oracle_tol = 1e-9]
//   [output]   [directory = runs], [trace_name = trace.csv],
//              [wallclock = false]
//   [seed]     value
//
// Keys in brackets are optional with the default shown. Unknown sections
// and keys, duplicates, missing keys and out-of-range values are all errors
// and carry the line they refer to.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tbrvi/game.hpp"
#include "tbrvi/io.hpp"
#include "tbrvi/learner.hpp"

namespace tbrvi {

struct ConfigIssue {
  std::size_t line = 0;
  std::string message;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues)
      : std::runtime_error(render(issues)), issues_(std::move(issues)) {}

  const std::vector<ConfigIssue>& issues() const { return issues_; }

 private:
  static std::string render(const std::vector<ConfigIssue>& issues) {
    std::string out;
    for (const auto& i : issues) {
      if (!out.empty()) out += '\n';
      out += "line " + std::to_string(i.line) + ": " + i.message;
    }
    return out;
  }
  std::vector<ConfigIssue> issues_;
};

struct OutputSpec {
  std::string directory = "runs";
  std::string trace_name = "trace.csv";
  bool wallclock = false;

  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

// Either a game file or generator parameters.
struct GameSource {
  std::optional<std::string> path;
  std::optional<GeneratorSpec> generator;

  friend bool operator==(const GameSource&, const GameSource&) = default;
};

// A parsed configuration file. config.opponent_policy stays empty; the
// policy file named by opponent_policy_path is loaded at run time.
struct RunSpec {
  GameSource game;
  ExperimentConfig config;
  std::optional<std::string> opponent_policy_path;
  OutputSpec output;

  friend bool operator==(const RunSpec& a, const RunSpec& b) {
    const ExperimentConfig& x = a.config;
    const ExperimentConfig& y = b.config;
    return a.game == b.game && a.opponent_policy_path == b.opponent_policy_path &&
           a.output == b.output && x.T == y.T && x.K == y.K && x.eta == y.eta &&
           x.schedule == y.schedule && x.mode == y.mode && x.learner == y.learner &&
           x.seed == y.seed && x.eval_every == y.eval_every &&
           x.theory_strict == y.theory_strict && x.oracle_tol == y.oracle_tol &&
           x.record_wallclock == y.record_wallclock;
  }
};

inline const char* mode_name(Mode m) {
  return m == Mode::kSelfPlay ? "self-play" : "fixed-opponent";
}

namespace detail {

inline std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

struct Entry {
  std::string value;
  std::size_t line = 0;
};

// Key tables per section.
inline const std::map<std::string, std::vector<std::string>>& config_schema() {
  static const std::map<std::string, std::vector<std::string>> schema = {
      {"game", {"path", "states", "actions1", "actions2", "branching", "gamma", "seed"}},
      {"learner",
       {"T", "K", "eta", "alpha", "h", "c_ab", "mode", "opponent_policy",
        "learner_player", "theory_strict"}},
      {"eval", {"eval_every", "oracle_tol"}},
      {"output", {"directory", "trace_name", "wallclock"}},
      {"seed", {"value"}},
  };
  return schema;
}

inline std::string nearest(const std::string& word,
                           const std::vector<std::string>& options) {
  std::string best;
  std::size_t best_d = 4;
  for (const auto& o : options) {
    const std::size_t d = edit_distance(word, o);
    if (d < best_d) {
      best_d = d;
      best = o;
    }
  }
  return best;
}

class ConfigReader {
 public:
  explicit ConfigReader(const std::string& text) {
    const auto& schema = config_schema();
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    std::string section;
    bool section_known = false;
    while (std::getline(in, raw)) {
      ++line_no;
      std::string line = trim(strip_comment(raw));
      if (const auto semi = line.find(';'); semi != std::string::npos)
        line = trim(line.substr(0, semi));
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') {
          issue(line_no, "malformed section header '" + line + "'");
          section_known = false;
          continue;
        }
        section = trim(line.substr(1, line.size() - 2));
        section_known = schema.count(section) > 0;
        if (!section_known) {
          std::vector<std::string> names;
          for (const auto& [k, v] : schema) names.push_back(k);
          std::string msg = "unknown section [" + section + "]";
          if (auto s = nearest(section, names); !s.empty())
            msg += "; did you mean [" + s + "]?";
          issue(line_no, msg);
        }
        if (seen_sections_.count(section) && section_known)
          issue(line_no, "duplicate section [" + section + "]");
        seen_sections_[section] = line_no;
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        issue(line_no, "expected 'key = value'");
        continue;
      }
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (section.empty()) {
        issue(line_no, "key '" + key + "' outside any section");
        continue;
      }
      if (!section_known) continue;
      const auto& keys = schema.at(section);
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        std::string msg = "unknown key '" + key + "' in [" + section + "]";
        if (auto s = nearest(key, keys); !s.empty()) msg += "; did you mean '" + s + "'?";
        issue(line_no, msg);
        continue;
      }
      if (value.empty()) {
        issue(line_no, "empty value for '" + key + "'");
        continue;
      }
      auto& slot = entries_[section + "." + key];
      if (slot.line != 0) {
        issue(line_no, "duplicate key '" + key + "' (first set on line " +
                           std::to_string(slot.line) + ")");
        continue;
      }
      slot = {value, line_no};
    }
  }

  bool has(const std::string& section, const std::string& key) const {
    return entries_.count(section + "." + key) > 0;
  }

  const Entry* find(const std::string& section, const std::string& key) const {
    auto it = entries_.find(section + "." + key);
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::size_t section_line(const std::string& section) const {
    auto it = seen_sections_.find(section);
    return it == seen_sections_.end() ? 0 : it->second;
  }

  void issue(std::size_t line, std::string message) {
    issues_.push_back({line, std::move(message)});
  }

  std::vector<ConfigIssue>& issues() { return issues_; }

  // Missing keys are reported against the section header, or line 0 when
  // the whole section is absent.
  const Entry* require(const std::string& section, const std::string& key) {
    const Entry* e = find(section, key);
    if (!e) issue(section_line(section), "missing required key '" + key + "' in [" + section + "]");
    return e;
  }

  std::optional<double> real(const Entry* e, const std::string& key) {
    if (!e) return std::nullopt;
    try {
      std::size_t used = 0;
      const double v = std::stod(e->value, &used);
      if (used != e->value.size()) throw std::invalid_argument(key);
      return v;
    } catch (const std::exception&) {
      issue(e->line, "'" + key + "' expects a number, got '" + e->value + "'");
      return std::nullopt;
    }
  }

  std::optional<std::uint64_t> integer(const Entry* e, const std::string& key) {
    if (!e) return std::nullopt;
    const std::string& s = e->value;
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      issue(e->line, "'" + key + "' expects a non-negative integer, got '" + s + "'");
      return std::nullopt;
    }
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      issue(e->line, "'" + key + "' is out of range");
      return std::nullopt;
    }
  }

  std::optional<bool> boolean(const Entry* e, const std::string& key) {
    if (!e) return std::nullopt;
    if (e->value == "true") return true;
    if (e->value == "false") return false;
    issue(e->line, "'" + key + "' expects true or false, got '" + e->value + "'");
    return std::nullopt;
  }

 private:
  std::map<std::string, Entry> entries_;
  std::map<std::string, std::size_t> seen_sections_;
  std::vector<ConfigIssue> issues_;
};

}  // namespace detail

inline RunSpec parse_config(const std::string& text) {
  detail::ConfigReader rd(text);
  RunSpec spec;
  ExperimentConfig& cfg = spec.config;

  const auto range = [&](const detail::Entry* e, const std::string& key, bool ok,
                         const std::string& want) {
    if (e && !ok) rd.issue(e->line, "'" + key + "' out of range: " + want + ", got " + e->value);
  };

  // [game]
  if (const auto* path = rd.find("game", "path")) {
    spec.game.path = path->value;
    for (const char* k : {"states", "actions1", "actions2", "branching", "gamma", "seed"}) {
      if (const auto* e = rd.find("game", k)) {
        rd.issue(e->line, std::string("'") + k + "' conflicts with 'path' in [game]");
      }
    }
  } else {
    GeneratorSpec gen;
    const auto count = [&](const char* key, std::size_t& slot, bool required) {
      const auto* e = required ? rd.require("game", key) : rd.find("game", key);
      if (auto v = rd.integer(e, key)) {
        range(e, key, *v >= 1, "at least 1");
        slot = static_cast<std::size_t>(*v);
        return true;
      }
      return false;
    };
    const bool have_states = count("states", gen.n_states, true);
    count("actions1", gen.n_actions1, true);
    count("actions2", gen.n_actions2, true);
    if (!count("branching", gen.branching, false)) gen.branching = gen.n_states;
    if (const auto* e = rd.find("game", "branching"); e && have_states)
      range(e, "branching", gen.branching <= gen.n_states, "at most states");
    const auto* g = rd.require("game", "gamma");
    if (auto v = rd.real(g, "gamma")) {
      range(g, "gamma", *v > 0.0 && *v < 1.0, "(0, 1)");
      gen.gamma = *v;
    }
    const auto* s = rd.require("game", "seed");
    if (auto v = rd.integer(s, "seed")) gen.seed = *v;
    spec.game.generator = gen;
  }

  // [learner]
  {
    const auto* e = rd.require("learner", "T");
    if (auto v = rd.integer(e, "T")) {
      range(e, "T", *v >= 1, "at least 1");
      cfg.T = static_cast<std::size_t>(*v);
    }
  }
  {
    const auto* e = rd.require("learner", "K");
    if (auto v = rd.integer(e, "K")) cfg.K = static_cast<std::size_t>(*v);
  }
  {
    const auto* e = rd.require("learner", "eta");
    if (auto v = rd.real(e, "eta")) {
      range(e, "eta", *v > 0.0, "positive");
      cfg.eta = *v;
    }
  }
  const auto positive = [&](const char* key, double& slot) {
    const auto* e = rd.find("learner", key);
    if (auto v = rd.real(e, key)) {
      range(e, key, *v > 0.0, "positive");
      slot = *v;
    }
  };
  positive("alpha", cfg.schedule.alpha);
  positive("h", cfg.schedule.h);
  positive("c_ab", cfg.schedule.c_ab);
  {
    const StepSchedule& sch = cfg.schedule;
    const auto* e = rd.find("learner", "alpha");
    if (!e) e = rd.find("learner", "h");
    const std::size_t line = e ? e->line : rd.section_line("learner");
    if (sch.alpha > 0.0 && sch.h > 0.0 && !(sch.alpha / sch.h < 1.0))
      rd.issue(line, "alpha/h must be below 1");
    if (sch.alpha > 0.0 && sch.h > 0.0 && sch.c_ab > 0.0 &&
        sch.c_ab * sch.alpha / sch.h > 1.0) {
      const auto* c = rd.find("learner", "c_ab");
      rd.issue(c ? c->line : line, "c_ab * alpha / h must be at most 1");
    }
  }
  if (const auto* e = rd.find("learner", "mode")) {
    if (e->value == "self-play") {
      cfg.mode = Mode::kSelfPlay;
    } else if (e->value == "fixed-opponent") {
      cfg.mode = Mode::kFixedOpponent;
    } else {
      rd.issue(e->line, "'mode' expects self-play or fixed-opponent, got '" + e->value + "'");
    }
  }
  if (const auto* e = rd.find("learner", "opponent_policy")) {
    if (cfg.mode != Mode::kFixedOpponent)
      rd.issue(e->line, "'opponent_policy' requires mode = fixed-opponent");
    spec.opponent_policy_path = e->value;
  }
  if (const auto* e = rd.find("learner", "learner_player")) {
    if (e->value == "1") {
      cfg.learner = Player::kFirst;
    } else if (e->value == "2") {
      cfg.learner = Player::kSecond;
    } else {
      rd.issue(e->line, "'learner_player' expects 1 or 2, got '" + e->value + "'");
    }
  }
  if (auto v = rd.boolean(rd.find("learner", "theory_strict"), "theory_strict"))
    cfg.theory_strict = *v;

  // [eval]
  {
    const auto* e = rd.find("eval", "eval_every");
    if (auto v = rd.integer(e, "eval_every")) {
      range(e, "eval_every", *v >= 1, "at least 1");
      cfg.eval_every = static_cast<std::size_t>(*v);
    }
    const auto* t = rd.find("eval", "oracle_tol");
    if (auto v = rd.real(t, "oracle_tol")) {
      range(t, "oracle_tol", *v > 0.0, "positive");
      cfg.oracle_tol = *v;
    }
  }

  // [output]
  if (const auto* e = rd.find("output", "directory")) spec.output.directory = e->value;
  if (const auto* e = rd.find("output", "trace_name")) {
    spec.output.trace_name = e->value;
    if (e->value.find('/') != std::string::npos)
      rd.issue(e->line, "'trace_name' must be a file name, not a path");
  }
  if (auto v = rd.boolean(rd.find("output", "wallclock"), "wallclock")) {
    spec.output.wallclock = *v;
    cfg.record_wallclock = *v;
  }

  // [seed]
  {
    const auto* e = rd.require("seed", "value");
    if (auto v = rd.integer(e, "value")) cfg.seed = *v;
  }

  if (!rd.issues().empty()) {
    auto issues = rd.issues();
    std::stable_sort(issues.begin(), issues.end(),
                     [](const ConfigIssue& a, const ConfigIssue& b) { return a.line < b.line; });
    throw ConfigError(std::move(issues));
  }
  return spec;
}

// Canonical text form; parse_config(format_config(s)) == s.
inline std::string format_config(const RunSpec& spec) {
  using detail::format_double;
  const ExperimentConfig& c = spec.config;
  std::ostringstream os;
  os << "[game]\n";
  if (spec.game.path) {
    os << "path = " << *spec.game.path << '\n';
  } else {
    const GeneratorSpec& g = *spec.game.generator;
    os << "states = " << g.n_states << "\nactions1 = " << g.n_actions1
       << "\nactions2 = " << g.n_actions2 << "\nbranching = " << g.branching
       << "\ngamma = " << format_double(g.gamma) << "\nseed = " << g.seed << '\n';
  }
  os << "\n[learner]\nT = " << c.T << "\nK = " << c.K
     << "\neta = " << format_double(c.eta)
     << "\nalpha = " << format_double(c.schedule.alpha)
     << "\nh = " << format_double(c.schedule.h)
     << "\nc_ab = " << format_double(c.schedule.c_ab) << "\nmode = " << mode_name(c.mode)
     << '\n';
  if (spec.opponent_policy_path) os << "opponent_policy = " << *spec.opponent_policy_path << '\n';
  os << "learner_player = " << player_number(c.learner)
     << "\ntheory_strict = " << (c.theory_strict ? "true" : "false") << '\n';
  os << "\n[eval]\neval_every = " << c.eval_every
     << "\noracle_tol = " << format_double(c.oracle_tol) << '\n';
  os << "\n[output]\ndirectory = " << spec.output.directory
     << "\ntrace_name = " << spec.output.trace_name
     << "\nwallclock = " << (spec.output.wallclock ? "true" : "false") << '\n';
  os << "\n[seed]\nvalue = " << c.seed << '\n';
  return os.str();
}

// Reads a config file. Relative game and policy paths are resolved against
// the file's directory.
inline RunSpec load_config(const std::string& path) {
  RunSpec spec = parse_config(detail::read_file(path));
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  const auto resolve = [&](std::string& p) {
    const std::filesystem::path fp(p);
    if (fp.is_relative()) p = (base / fp).lexically_normal().string();
  };
  if (spec.game.path) resolve(*spec.game.path);
  if (spec.opponent_policy_path) resolve(*spec.opponent_policy_path);
  return spec;
}

}  // namespace tbrvi

#endif  // TBRVI_CONFIG_HPP_
