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

#ifndef TBRVI_IO_HPP_
#define TBRVI_IO_HPP_

// Text formats for games (`zsg 1`) and joint policies (`zsp 1`).
//
// Game file, one record per line, `#` starts a comment:
//   zsg 1
//   states N / actions1 M / actions2 L / gamma G / start S0
//   R s a1 a2 value          (unlisted entries are 0)
//   P s a1 a2 s' prob        (unlisted entries are 0)
// Rows off by at most 1e-9 are renormalized on load; larger defects are
// rejected with the offending row.
//
// Policy file:
//   zsp 1
//   states N / actions1 M / actions2 L
//   pi1 s p_0 ... p_{M-1}
//   pi2 s p_0 ... p_{L-1}

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tbrvi/game.hpp"

namespace tbrvi {

class FormatError : public std::runtime_error {
 public:
  FormatError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline std::string strip_comment(const std::string& line) {
  const auto pos = line.find('#');
  std::string out = pos == std::string::npos ? line : line.substr(0, pos);
  const auto first = out.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = out.find_last_not_of(" \t\r\n");
  return out.substr(first, last - first + 1);
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

inline double parse_double(const std::string& tok, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw FormatError(line, "expected a number, got '" + tok + "'");
  }
}

inline std::size_t parse_index(const std::string& tok, std::size_t line) {
  try {
    std::size_t used = 0;
    if (!tok.empty() && tok[0] == '-') throw std::invalid_argument(tok);
    const unsigned long long v = std::stoull(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw FormatError(line, "expected a non-negative integer, got '" + tok + "'");
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path);
}

inline std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace detail

// FNV-1a, used to fingerprint game files in run manifests.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

inline constexpr double kRenormalizeTolerance = 1e-9;

inline MarkovGame parse_game(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  bool header = false;
  std::optional<std::size_t> n_states, n1, n2, start;
  std::optional<double> gamma;
  struct Entry {
    std::size_t line;
    std::vector<std::size_t> idx;
    double value;
  };
  std::vector<Entry> rewards, probs;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = detail::strip_comment(raw);
    if (line.empty()) continue;
    const auto tok = detail::split_ws(line);
    if (!header) {
      if (tok.size() != 2 || tok[0] != "zsg" || tok[1] != "1") {
        throw FormatError(line_no, "expected header 'zsg 1'");
      }
      header = true;
      continue;
    }
    const std::string& key = tok[0];
    const auto expect = [&](std::size_t n) {
      if (tok.size() != n) {
        throw FormatError(line_no, "'" + key + "' expects " +
                                       std::to_string(n - 1) + " fields");
      }
    };
    if (key == "states") {
      expect(2);
      n_states = detail::parse_index(tok[1], line_no);
    } else if (key == "actions1") {
      expect(2);
      n1 = detail::parse_index(tok[1], line_no);
    } else if (key == "actions2") {
      expect(2);
      n2 = detail::parse_index(tok[1], line_no);
    } else if (key == "gamma") {
      expect(2);
      gamma = detail::parse_double(tok[1], line_no);
    } else if (key == "start") {
      expect(2);
      start = detail::parse_index(tok[1], line_no);
    } else if (key == "R") {
      expect(5);
      rewards.push_back({line_no,
                         {detail::parse_index(tok[1], line_no),
                          detail::parse_index(tok[2], line_no),
                          detail::parse_index(tok[3], line_no)},
                         detail::parse_double(tok[4], line_no)});
    } else if (key == "P") {
      expect(6);
      probs.push_back({line_no,
                       {detail::parse_index(tok[1], line_no),
                        detail::parse_index(tok[2], line_no),
                        detail::parse_index(tok[3], line_no),
                        detail::parse_index(tok[4], line_no)},
                       detail::parse_double(tok[5], line_no)});
    } else {
      throw FormatError(line_no, "unknown record '" + key + "'");
    }
  }
  if (!header) throw FormatError(line_no, "missing header 'zsg 1'");
  if (!n_states || !n1 || !n2 || !gamma || !start) {
    throw FormatError(line_no,
                      "missing one of states/actions1/actions2/gamma/start");
  }
  if (*n_states == 0 || *n1 == 0 || *n2 == 0) {
    throw FormatError(line_no, "sizes must be positive");
  }
  const std::size_t ns = *n_states, na1 = *n1, na2 = *n2;
  std::vector<double> reward(ns * na1 * na2, 0.0);
  std::vector<double> transition(ns * na1 * na2 * ns, 0.0);
  std::vector<std::size_t> row_line(ns * na1 * na2, 0);
  for (const auto& e : rewards) {
    if (e.idx[0] >= ns || e.idx[1] >= na1 || e.idx[2] >= na2)
      throw FormatError(e.line, "reward index out of range");
    reward[(e.idx[0] * na1 + e.idx[1]) * na2 + e.idx[2]] = e.value;
  }
  for (const auto& e : probs) {
    if (e.idx[0] >= ns || e.idx[1] >= na1 || e.idx[2] >= na2 || e.idx[3] >= ns)
      throw FormatError(e.line, "transition index out of range");
    const std::size_t row = (e.idx[0] * na1 + e.idx[1]) * na2 + e.idx[2];
    transition[row * ns + e.idx[3]] = e.value;
    row_line[row] = e.line;
  }
  for (std::size_t row = 0; row < ns * na1 * na2; ++row) {
    double sum = 0.0;
    for (std::size_t j = 0; j < ns; ++j) {
      const double p = transition[row * ns + j];
      if (!(p >= 0.0)) throw FormatError(row_line[row], "negative probability");
      sum += p;
    }
    const std::size_t s = row / (na1 * na2), a1 = (row / na2) % na1, a2 = row % na2;
    if (std::abs(sum - 1.0) > kRenormalizeTolerance) {
      throw FormatError(row_line[row] == 0 ? line_no : row_line[row],
                        "transition row (" + std::to_string(s) + "," +
                            std::to_string(a1) + "," + std::to_string(a2) +
                            ") sums to " + detail::format_double(sum));
    }
    for (std::size_t j = 0; j < ns; ++j) transition[row * ns + j] /= sum;
  }
  MarkovGame game(ns, na1, na2, std::move(transition), std::move(reward),
                  *gamma, *start);
  const auto violations = validate_game(game);
  if (!violations.empty()) throw FormatError(line_no, violations.front().message);
  return game;
}

inline MarkovGame load_game(const std::string& path) {
  return parse_game(detail::read_file(path));
}

// Emits every reward and every nonzero transition with round-trip precision.
inline std::string format_game(const MarkovGame& game) {
  std::ostringstream os;
  os << "zsg 1\n"
     << "states " << game.n_states() << "\n"
     << "actions1 " << game.n_actions1() << "\n"
     << "actions2 " << game.n_actions2() << "\n"
     << "gamma " << detail::format_double(game.gamma()) << "\n"
     << "start " << game.start_state() << "\n";
  for (std::size_t s = 0; s < game.n_states(); ++s)
    for (std::size_t a1 = 0; a1 < game.n_actions1(); ++a1)
      for (std::size_t a2 = 0; a2 < game.n_actions2(); ++a2)
        os << "R " << s << ' ' << a1 << ' ' << a2 << ' '
           << detail::format_double(game.r1(s, a1, a2)) << "\n";
  for (std::size_t s = 0; s < game.n_states(); ++s)
    for (std::size_t a1 = 0; a1 < game.n_actions1(); ++a1)
      for (std::size_t a2 = 0; a2 < game.n_actions2(); ++a2)
        for (std::size_t n = 0; n < game.n_states(); ++n) {
          const double p = game.p(s, a1, a2, n);
          if (p != 0.0)
            os << "P " << s << ' ' << a1 << ' ' << a2 << ' ' << n << ' '
               << detail::format_double(p) << "\n";
        }
  return os.str();
}

inline JointPolicy parse_policy(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  bool header = false;
  std::optional<std::size_t> ns, n1, n2;
  JointPolicy pi;
  std::vector<bool> seen1, seen2;
  const auto ensure_shape = [&] {
    if (pi.pi1.size() != 0) return;
    if (!ns || !n1 || !n2)
      throw FormatError(line_no, "policy rows before states/actions1/actions2");
    pi.pi1 = Matrix::Zero(static_cast<Eigen::Index>(*ns), static_cast<Eigen::Index>(*n1));
    pi.pi2 = Matrix::Zero(static_cast<Eigen::Index>(*ns), static_cast<Eigen::Index>(*n2));
    seen1.assign(*ns, false);
    seen2.assign(*ns, false);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = detail::strip_comment(raw);
    if (line.empty()) continue;
    const auto tok = detail::split_ws(line);
    if (!header) {
      if (tok.size() != 2 || tok[0] != "zsp" || tok[1] != "1")
        throw FormatError(line_no, "expected header 'zsp 1'");
      header = true;
      continue;
    }
    const std::string& key = tok[0];
    if (key == "states" || key == "actions1" || key == "actions2") {
      if (tok.size() != 2) throw FormatError(line_no, "'" + key + "' expects 1 field");
      const auto v = detail::parse_index(tok[1], line_no);
      if (v == 0) throw FormatError(line_no, "sizes must be positive");
      (key == "states" ? ns : key == "actions1" ? n1 : n2) = v;
    } else if (key == "pi1" || key == "pi2") {
      ensure_shape();
      Matrix& m = key == "pi1" ? pi.pi1 : pi.pi2;
      auto& seen = key == "pi1" ? seen1 : seen2;
      if (tok.size() != static_cast<std::size_t>(m.cols()) + 2)
        throw FormatError(line_no, "'" + key + "' row has wrong length");
      const auto s = detail::parse_index(tok[1], line_no);
      if (s >= *ns) throw FormatError(line_no, "state out of range");
      for (Eigen::Index a = 0; a < m.cols(); ++a)
        m(static_cast<Eigen::Index>(s), a) =
            detail::parse_double(tok[static_cast<std::size_t>(a) + 2], line_no);
      if (!is_distribution(m.row(static_cast<Eigen::Index>(s)).transpose(), 1e-9))
        throw FormatError(line_no, "row is not a probability distribution");
      m.row(static_cast<Eigen::Index>(s)) /= m.row(static_cast<Eigen::Index>(s)).sum();
      seen[s] = true;
    } else {
      throw FormatError(line_no, "unknown record '" + key + "'");
    }
  }
  if (!header) throw FormatError(line_no, "missing header 'zsp 1'");
  ensure_shape();
  for (std::size_t s = 0; s < *ns; ++s)
    if (!seen1[s] || !seen2[s])
      throw FormatError(line_no, "missing policy row for state " + std::to_string(s));
  return pi;
}

inline JointPolicy load_policy(const std::string& path) {
  return parse_policy(detail::read_file(path));
}

inline std::string format_policy(const JointPolicy& pi) {
  std::ostringstream os;
  os << "zsp 1\nstates " << pi.pi1.rows() << "\nactions1 " << pi.pi1.cols()
     << "\nactions2 " << pi.pi2.cols() << "\n";
  for (const auto& [name, m] : {std::pair<const char*, const Matrix*>{"pi1", &pi.pi1},
                                std::pair<const char*, const Matrix*>{"pi2", &pi.pi2}}) {
    for (Eigen::Index s = 0; s < m->rows(); ++s) {
      os << name << ' ' << s;
      for (Eigen::Index a = 0; a < m->cols(); ++a)
        os << ' ' << detail::format_double((*m)(s, a));
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace tbrvi

#endif  // TBRVI_IO_HPP_
