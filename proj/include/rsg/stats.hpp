#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsg/game.hpp"
#include "rsg/montecarlo.hpp"
#include "rsg/strategy.hpp"

namespace rsg {

/// Conditional moments of one player's strategy given z:
///   p_k = P(alpha = k),  q_k = E[W_k 1{alpha = k}] for k in the player's private set.
/// `samples == 0` marks an exact (closed-form) result with zero standard errors.
struct StrategyStats {
  Player player = Player::A;
  std::vector<double> p;
  std::vector<double> q;
  std::vector<double> p_stderr;
  std::vector<double> q_stderr;
  std::size_t samples = 0;

  bool exact() const { return samples == 0; }
};

inline StrategyStats make_stats(Player player, std::vector<double> p, std::vector<double> q) {
  StrategyStats s;
  s.player = player;
  s.p_stderr.assign(p.size(), 0.0);
  s.q_stderr.assign(q.size(), 0.0);
  s.p = std::move(p);
  s.q = std::move(q);
  return s;
}

inline void check_stats(const StrategyStats& s, const GameInstance& game, Player expected) {
  if (s.player != expected) {
    throw std::invalid_argument(std::string("stats belong to player ") + to_string(s.player) + ", expected " +
                                to_string(expected));
  }
  if (s.p.size() != game.n()) throw std::invalid_argument("stats p has wrong length");
  if (s.q.size() != game.partition().private_of(expected).count) {
    throw std::invalid_argument("stats q has wrong length");
  }
}

namespace detail {

/// p for a strategy whose action cannot depend on W.
inline std::vector<double> blind_choice_probabilities(const Strategy& s, std::size_t n) {
  std::vector<double> p(n, 0.0);
  const std::vector<double> dummy(n, 0.0);
  if (const auto* sx = std::get_if<SimplexStrategy>(&s)) return sx->p;
  if (const auto* sc = std::get_if<ScoreStrategy>(&s)) {
    p[argmax_score(*sc, dummy)] = 1.0;
    return p;
  }
  if (const auto* m = std::get_if<MixtureStrategy>(&s)) {
    const double w = 1.0 / static_cast<double>(m->components.size());
    for (const auto& c : m->components) p[argmax_score(c, dummy)] += w;
    return p;
  }
  throw std::logic_error("strategy observes rewards");
}

struct StatsAccumulator {
  std::vector<double> count;
  std::vector<ScalarMoments> q;

  void merge(const StatsAccumulator& o) {
    for (std::size_t k = 0; k < count.size(); ++k) count[k] += o.count[k];
    for (std::size_t k = 0; k < q.size(); ++k) q[k].merge(o.q[k]);
  }
};

inline Lane action_lane(Player p) { return p == Player::A ? Lane::action_a : Lane::action_b; }

}  // namespace detail

/// Estimate (p, q) for `strategy` played by `player`. Strategies whose action
/// ignores W (simplex, or score/mixture with nothing observed) are evaluated
/// exactly with q_k = E_k p_k. Otherwise `n_samples` worlds are drawn.
inline StrategyStats estimate_stats(const Strategy& strategy, const GameInstance& game, Player player,
                                    std::size_t n_samples, RngSpec rng, unsigned threads = 1) {
  check_playable(strategy, game, player);
  const auto priv = game.partition().private_of(player);
  const std::size_t n = game.n();

  if (!observes_rewards(strategy)) {
    auto p = detail::blind_choice_probabilities(strategy, n);
    std::vector<double> q(priv.count);
    for (std::size_t i = 0; i < priv.count; ++i) q[i] = game.expected(priv.begin + i) * p[priv.begin + i];
    return make_stats(player, std::move(p), std::move(q));
  }
  if (n_samples < 1) throw std::invalid_argument("estimate_stats needs at least one sample");

  detail::StatsAccumulator zero{std::vector<double>(n, 0.0), std::vector<ScalarMoments>(priv.count)};
  auto acc = run_blocks(n_samples, threads, zero,
                        [&](detail::StatsAccumulator& a, std::size_t begin, std::size_t end, std::uint64_t block) {
                          Rng world_rng(rng, Lane::world, block);
                          Rng action_rng(rng, detail::action_lane(player), block);
                          std::vector<double> world(n, 0.0);
                          for (std::size_t s = begin; s < end; ++s) {
                            for (std::size_t k = priv.begin; k < priv.end(); ++k) {
                              world[k] = game.distribution(k).sample(world_rng);
                            }
                            const std::size_t k = choose(strategy, world, action_rng);
                            a.count[k] += 1.0;
                            for (std::size_t i = 0; i < priv.count; ++i) {
                              a.q[i].add(priv.begin + i == k ? world[k] : 0.0);
                            }
                          }
                        });

  StrategyStats out;
  out.player = player;
  out.samples = n_samples;
  const double N = static_cast<double>(n_samples);
  out.p.resize(n);
  out.p_stderr.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.p[k] = acc.count[k] / N;
    out.p_stderr[k] = n_samples > 1 ? std::sqrt(out.p[k] * (1.0 - out.p[k]) / (N - 1.0)) : 0.0;
  }
  out.q.resize(priv.count);
  out.q_stderr.resize(priv.count);
  for (std::size_t i = 0; i < priv.count; ++i) {
    out.q[i] = acc.q[i].mean();
    out.q_stderr[i] = acc.q[i].stderr_of_mean();
  }
  return out;
}

inline StrategyStats estimate_stats(const Strategy& strategy, const GameInstance& game, Player player,
                                    const McConfig& mc) {
  return estimate_stats(strategy, game, player, mc.samples, mc.rng, mc.threads);
}

}  // namespace rsg
