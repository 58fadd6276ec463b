#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsg/distribution.hpp"
#include "rsg/game.hpp"
#include "rsg/strategy.hpp"

// Plain-text game and strategy files: one `key = value` per line, `#` starts
// a comment. Resource indices in keys are 1-based.
//
//   partition = 1 1 1 0          # a b c d
//   resource.1 = exponential 1   # rate
//   resource.2 = uniform 0 2
//   resource.3 = discrete 0:0.5 2:0.5
//   z.3 = 1.7                    # shared resources only
//
//   player = A
//   kind = simplex | score | threshold | mixture
//   p = 0.2 0.3 0.5              # simplex
//   weights = 1 0.5 0.5          # score; observe = private | none
//   tau = 0.69  tail = 0.6 0.4   # threshold
//   component = 1 1 1            # mixture, one line per component

namespace rsg::io {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::string field, const std::string& msg)
      : std::runtime_error(format(line, field, msg)), line_(line), field_(std::move(field)) {}

  /// 1-based; 0 when the problem is not tied to a single line.
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  static std::string format(std::size_t line, const std::string& field, const std::string& msg) {
    std::string s;
    if (line) s += "line " + std::to_string(line) + ": ";
    if (!field.empty()) s += "'" + field + "': ";
    return s + msg;
  }
  std::size_t line_;
  std::string field_;
};

struct Entry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

inline double to_double(const std::string& tok, const Entry& e) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ParseError(e.line, e.key, "'" + tok + "' is not a number");
  }
}

inline std::vector<double> numbers(const Entry& e) {
  std::vector<double> v;
  for (const auto& tok : split_ws(e.value)) v.push_back(to_double(tok, e));
  if (v.empty()) throw ParseError(e.line, e.key, "expected at least one number");
  return v;
}

inline std::size_t resource_index(const std::string& suffix, const Entry& e, std::size_t n) {
  std::size_t used = 0;
  unsigned long k = 0;
  try {
    k = std::stoul(suffix, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != suffix.size() || k < 1 || k > n) {
    throw ParseError(e.line, e.key, "resource index must be in 1.." + std::to_string(n));
  }
  return k - 1;
}

}  // namespace detail

/// Splits text into entries, rejecting malformed lines and repeated keys
/// (except those listed in `repeatable`).
inline std::vector<Entry> parse_entries(const std::string& text, const std::vector<std::string>& repeatable = {}) {
  std::vector<Entry> out;
  std::map<std::string, std::size_t> seen;
  std::istringstream in(text);
  std::size_t lineno = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "", "expected 'key = value'");
    Entry e{detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)), lineno};
    if (e.key.empty()) throw ParseError(lineno, "", "empty key");
    if (e.value.empty()) throw ParseError(lineno, e.key, "empty value");
    const bool multi = std::find(repeatable.begin(), repeatable.end(), e.key) != repeatable.end();
    if (!multi) {
      if (auto it = seen.find(e.key); it != seen.end()) {
        throw ParseError(lineno, e.key, "duplicate key (first given on line " + std::to_string(it->second) + ")");
      }
      seen[e.key] = lineno;
    }
    out.push_back(std::move(e));
  }
  return out;
}

inline RewardDistribution parse_distribution(const Entry& e) {
  const auto tok = detail::split_ws(e.value);
  const std::string& kind = tok.front();
  auto args = [&](std::size_t count) {
    if (tok.size() != count + 1) {
      throw ParseError(e.line, e.key, kind + " takes " + std::to_string(count) + " parameter(s)");
    }
    std::vector<double> v;
    for (std::size_t i = 1; i < tok.size(); ++i) v.push_back(detail::to_double(tok[i], e));
    return v;
  };
  try {
    if (kind == "exponential") return RewardDistribution::exponential(args(1)[0]);
    if (kind == "exponential_mean") return RewardDistribution::exponential_mean(args(1)[0]);
    if (kind == "uniform") {
      const auto v = args(2);
      return RewardDistribution::uniform(v[0], v[1]);
    }
    if (kind == "point") return RewardDistribution::point(args(1)[0]);
    if (kind == "discrete") {
      std::vector<double> values, probs;
      for (std::size_t i = 1; i < tok.size(); ++i) {
        const auto colon = tok[i].find(':');
        if (colon == std::string::npos) throw ParseError(e.line, e.key, "discrete atoms are written value:prob");
        values.push_back(detail::to_double(tok[i].substr(0, colon), e));
        probs.push_back(detail::to_double(tok[i].substr(colon + 1), e));
      }
      if (values.empty()) throw ParseError(e.line, e.key, "discrete needs at least one atom");
      return RewardDistribution::discrete(std::move(values), std::move(probs));
    }
  } catch (const std::invalid_argument& ex) {
    throw ParseError(e.line, e.key, ex.what());
  }
  throw ParseError(e.line, e.key, "unknown distribution '" + kind + "'");
}

/// Shared resources without a `z.K` entry are left for the caller to sample;
/// `missing_z` lists them (0-based). The returned game has z = 0 there.
struct GameFile {
  GameInstance game;
  std::vector<std::size_t> missing_z;
};

inline GameFile parse_game(const std::string& text) {
  const auto entries = parse_entries(text);
  std::optional<Partition> part;
  std::optional<std::size_t> n_decl;
  const Entry* n_entry = nullptr;
  for (const auto& e : entries) {
    if (e.key == "partition") {
      const auto v = detail::numbers(e);
      if (v.size() != 4) throw ParseError(e.line, e.key, "expected four counts a b c d");
      std::size_t c[4];
      for (int i = 0; i < 4; ++i) {
        if (!(v[i] >= 0.0) || v[i] != static_cast<double>(static_cast<std::size_t>(v[i]))) {
          throw ParseError(e.line, e.key, "counts must be non-negative integers");
        }
        c[i] = static_cast<std::size_t>(v[i]);
      }
      part = Partition{c[0], c[1], c[2], c[3]};
      if (part->n() == 0) throw ParseError(e.line, e.key, "game needs at least one resource");
    } else if (e.key == "n") {
      const auto v = detail::numbers(e);
      if (v.size() != 1 || !(v[0] >= 1.0) || v[0] != static_cast<double>(static_cast<std::size_t>(v[0]))) {
        throw ParseError(e.line, e.key, "n must be a positive integer");
      }
      n_decl = static_cast<std::size_t>(v[0]);
      n_entry = &e;
    }
  }
  if (!part) throw ParseError(0, "partition", "missing");
  const std::size_t n = part->n();
  if (n_decl && *n_decl != n) {
    throw ParseError(n_entry->line, "n", "does not match partition total " + std::to_string(n));
  }

  std::vector<std::optional<RewardDistribution>> dists(n);
  std::vector<std::optional<double>> z(n);
  for (const auto& e : entries) {
    if (e.key == "partition" || e.key == "n") continue;
    if (e.key.rfind("resource.", 0) == 0) {
      dists[detail::resource_index(e.key.substr(9), e, n)] = parse_distribution(e);
    } else if (e.key.rfind("z.", 0) == 0) {
      const auto k = detail::resource_index(e.key.substr(2), e, n);
      if (!part->shared().contains(k)) throw ParseError(e.line, e.key, "z is only given for shared resources");
      const auto v = detail::numbers(e);
      if (v.size() != 1 || !(v[0] >= 0.0)) throw ParseError(e.line, e.key, "expected one non-negative value");
      z[k] = v[0];
    } else {
      throw ParseError(e.line, e.key, "unknown key");
    }
  }

  std::vector<RewardDistribution> ds;
  for (std::size_t k = 0; k < n; ++k) {
    if (!dists[k]) throw ParseError(0, "resource." + std::to_string(k + 1), "missing");
    ds.push_back(*dists[k]);
  }
  std::vector<double> zv;
  std::vector<std::size_t> missing;
  for (std::size_t k = part->shared().begin; k < n; ++k) {
    zv.push_back(z[k].value_or(0.0));
    if (!z[k]) missing.push_back(k);
  }
  try {
    return {GameInstance(*part, std::move(ds), std::move(zv)), std::move(missing)};
  } catch (const std::invalid_argument& ex) {
    throw ParseError(0, "", ex.what());
  }
}

struct StrategyFile {
  Player player = Player::A;
  Strategy strategy;
};

/// Score and mixture strategies observe the player's private resources
/// unless `observe = none`.
inline StrategyFile parse_strategy(const std::string& text, const GameInstance& game) {
  const auto entries = parse_entries(text, {"component"});
  std::map<std::string, const Entry*> by_key;
  std::vector<const Entry*> components;
  for (const auto& e : entries) {
    if (e.key == "component") {
      components.push_back(&e);
      continue;
    }
    static const char* known[] = {"player", "kind", "p", "weights", "observe", "tau", "tail"};
    if (std::find(std::begin(known), std::end(known), e.key) == std::end(known)) {
      throw ParseError(e.line, e.key, "unknown key");
    }
    by_key[e.key] = &e;
  }
  auto need = [&](const char* key) -> const Entry& {
    auto it = by_key.find(key);
    if (it == by_key.end()) throw ParseError(0, key, "missing");
    return *it->second;
  };
  auto forbid_except = [&](std::vector<std::string> allowed, const std::string& kind) {
    allowed.insert(allowed.end(), {"player", "kind"});
    for (const auto& [k, e] : by_key) {
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
        throw ParseError(e->line, k, "not used by kind '" + kind + "'");
      }
    }
    if (kind != "mixture" && !components.empty()) {
      throw ParseError(components.front()->line, "component", "not used by kind '" + kind + "'");
    }
  };

  StrategyFile out;
  const auto& pe = need("player");
  if (pe.value == "A") {
    out.player = Player::A;
  } else if (pe.value == "B") {
    out.player = Player::B;
  } else {
    throw ParseError(pe.line, pe.key, "player must be A or B");
  }

  IndexRange observed = game.partition().private_of(out.player);
  if (auto it = by_key.find("observe"); it != by_key.end()) {
    if (it->second->value == "none") {
      observed = {0, 0};
    } else if (it->second->value != "private") {
      throw ParseError(it->second->line, "observe", "expected 'private' or 'none'");
    }
  }

  const auto& ke = need("kind");
  const std::string& kind = ke.value;
  try {
    if (kind == "simplex") {
      forbid_except({"p"}, kind);
      out.strategy = make_simplex(detail::numbers(need("p")));
    } else if (kind == "score") {
      forbid_except({"weights", "observe"}, kind);
      out.strategy = make_score(detail::numbers(need("weights")), observed);
    } else if (kind == "threshold") {
      forbid_except({"tau", "tail"}, kind);
      const auto tau = detail::numbers(need("tau"));
      if (tau.size() != 1) throw ParseError(need("tau").line, "tau", "expected one number");
      std::vector<double> tail;
      if (by_key.count("tail")) tail = detail::numbers(need("tail"));
      out.strategy = make_quantile_threshold(tau[0], std::move(tail));
    } else if (kind == "mixture") {
      forbid_except({"observe"}, kind);
      if (components.empty()) throw ParseError(0, "component", "mixture needs at least one component");
      std::vector<ScoreStrategy> cs;
      for (const auto* c : components) cs.push_back({detail::numbers(*c), observed});
      out.strategy = make_mixture(std::move(cs));
    } else {
      throw ParseError(ke.line, ke.key, "unknown kind '" + kind + "'");
    }
    check_playable(out.strategy, game, out.player);
  } catch (const std::invalid_argument& ex) {
    throw ParseError(0, "", ex.what());
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace rsg::io
