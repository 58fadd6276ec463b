#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "rsg/game.hpp"
#include "rsg/rng.hpp"

namespace rsg {

/// Ignores observations and draws from p.
struct SimplexStrategy {
  std::vector<double> p;
};

/// Pure strategy: argmax over k of weight_k * W_k on the observed range and
/// weight_k elsewhere, lowest index on ties. Covers best responses, the
/// worst-case adversary and the queue-weighted threshold strategies.
struct ScoreStrategy {
  std::vector<double> weights;
  IndexRange observed;
};

/// Resource 0 iff W_0 >= tau, otherwise a draw from `tail` over resources 1..n-1.
struct QuantileThresholdStrategy {
  double tau = 0.0;
  std::vector<double> tail;
};

/// Picks one component uniformly at random, then plays it.
struct MixtureStrategy {
  std::vector<ScoreStrategy> components;
};

using Strategy = std::variant<SimplexStrategy, ScoreStrategy, QuantileThresholdStrategy, MixtureStrategy>;

namespace detail {

inline void check_simplex(std::span<const double> p, const char* what, double tol = 1e-9) {
  if (p.empty()) throw std::invalid_argument(std::string(what) + ": empty probability vector");
  double s = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": negative entry");
    s += v;
  }
  if (std::abs(s - 1.0) > tol) throw std::invalid_argument(std::string(what) + ": entries must sum to 1");
}

inline void check_score(const ScoreStrategy& s) {
  if (s.weights.empty()) throw std::invalid_argument("score strategy: empty weights");
  if (s.observed.end() > s.weights.size()) throw std::invalid_argument("score strategy: observed range too large");
  for (double w : s.weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("score strategy: weights must be finite and non-negative");
    }
  }
}

/// Inverse-CDF draw from a probability vector; never returns a zero-mass
/// index unless every later entry is zero as well.
inline std::size_t categorical(std::span<const double> p, double u) {
  double c = 0.0;
  std::size_t last = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] <= 0.0) continue;
    c += p[k];
    last = k;
    if (u < c) return k;
  }
  return last;
}

inline std::size_t argmax_score(const ScoreStrategy& s, std::span<const double> world) {
  std::size_t best = 0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < s.weights.size(); ++k) {
    const double v = s.observed.contains(k) ? s.weights[k] * world[k] : s.weights[k];
    if (v > best_v) {
      best_v = v;
      best = k;
    }
  }
  return best;
}

}  // namespace detail

inline SimplexStrategy make_simplex(std::vector<double> p) {
  detail::check_simplex(p, "simplex strategy");
  return {std::move(p)};
}

inline SimplexStrategy uniform_simplex(std::size_t n) { return {std::vector<double>(n, 1.0 / static_cast<double>(n))}; }

inline ScoreStrategy make_score(std::vector<double> weights, IndexRange observed) {
  ScoreStrategy s{std::move(weights), observed};
  detail::check_score(s);
  return s;
}

inline QuantileThresholdStrategy make_quantile_threshold(double tau, std::vector<double> tail) {
  if (std::isnan(tau) || tau == -std::numeric_limits<double>::infinity()) {
    throw std::invalid_argument("threshold must be a number above -inf");
  }
  if (!tail.empty()) detail::check_simplex(tail, "threshold tail simplex");
  return {tau, std::move(tail)};
}

inline MixtureStrategy make_mixture(std::vector<ScoreStrategy> components) {
  if (components.empty()) throw std::invalid_argument("mixture strategy: no components");
  for (const auto& c : components) detail::check_score(c);
  return {std::move(components)};
}

/// Number of resources a strategy is defined over.
inline std::size_t strategy_size(const Strategy& s) {
  return std::visit(
      [](const auto& x) -> std::size_t {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SimplexStrategy>) return x.p.size();
        if constexpr (std::is_same_v<T, ScoreStrategy>) return x.weights.size();
        if constexpr (std::is_same_v<T, QuantileThresholdStrategy>) return x.tail.size() + 1;
        if constexpr (std::is_same_v<T, MixtureStrategy>) return x.components.front().weights.size();
      },
      s);
}

/// Checks that `s` is playable by `player` in `game`: matching size, and the
/// observed range of every score strategy is that player's private set.
inline void check_playable(const Strategy& s, const GameInstance& game, Player player) {
  if (strategy_size(s) != game.n()) {
    throw std::invalid_argument("strategy has " + std::to_string(strategy_size(s)) + " resources, game has " +
                                std::to_string(game.n()));
  }
  const auto priv = game.partition().private_of(player);
  auto check_range = [&](const ScoreStrategy& sc) {
    if (!(sc.observed == priv) && sc.observed.count != 0) {
      throw std::invalid_argument("score strategy observes resources outside the player's private set");
    }
    if (sc.weights.size() != game.n()) throw std::invalid_argument("mixture components differ in size");
  };
  if (const auto* sc = std::get_if<ScoreStrategy>(&s)) check_range(*sc);
  if (const auto* m = std::get_if<MixtureStrategy>(&s)) {
    for (const auto& c : m->components) check_range(c);
  }
  if (std::holds_alternative<QuantileThresholdStrategy>(s)) {
    if (!(priv == IndexRange{0, 1})) {
      throw std::invalid_argument("quantile threshold strategies need exactly resource 1 private to the player");
    }
  }
}

/// True when the chosen resource can depend on the reward realizations.
inline bool observes_rewards(const Strategy& s) {
  return std::visit(
      [](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SimplexStrategy>) return false;
        if constexpr (std::is_same_v<T, ScoreStrategy>) return x.observed.count > 0;
        if constexpr (std::is_same_v<T, QuantileThresholdStrategy>) return true;
        if constexpr (std::is_same_v<T, MixtureStrategy>) {
          for (const auto& c : x.components) {
            if (c.observed.count > 0) return true;
          }
          return false;
        }
      },
      s);
}

/// Choose a resource given a full world vector; only entries the strategy
/// observes are read.
inline std::size_t choose(const Strategy& s, std::span<const double> world, Rng& rng) {
  return std::visit(
      [&](const auto& x) -> std::size_t {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SimplexStrategy>) {
          return detail::categorical(x.p, rng.uniform());
        }
        if constexpr (std::is_same_v<T, ScoreStrategy>) return detail::argmax_score(x, world);
        if constexpr (std::is_same_v<T, QuantileThresholdStrategy>) {
          const double u = rng.uniform();
          if (world[0] >= x.tau || x.tail.empty()) return 0;
          return 1 + detail::categorical(x.tail, u);
        }
        if constexpr (std::is_same_v<T, MixtureStrategy>) {
          const auto i = rng.index(x.components.size());
          return detail::argmax_score(x.components[i], world);
        }
      },
      s);
}

/// Act on the player's private observations (ordered as the private range).
inline std::size_t act(const Strategy& s, const GameInstance& game, Player player,
                       std::span<const double> observed_private, Rng& rng) {
  const auto priv = game.partition().private_of(player);
  if (observed_private.size() != priv.count) {
    throw std::invalid_argument("expected " + std::to_string(priv.count) + " private observations, got " +
                                std::to_string(observed_private.size()));
  }
  check_playable(s, game, player);
  std::vector<double> world(game.n(), 0.0);
  for (std::size_t i = 0; i < priv.count; ++i) world[priv.begin + i] = observed_private[i];
  return choose(s, world, rng);
}

}  // namespace rsg
