#pragma once

#include <stdexcept>
#include <vector>

#include "rsg/game.hpp"
#include "rsg/montecarlo.hpp"
#include "rsg/stats.hpp"
#include "rsg/strategy.hpp"

namespace rsg {

/// Expected reward lost to collisions, before the 1/2 factor:
///   sum_A qA pB + sum_B pA qB + sum_{hidden, shared} E pA pB.
inline double collision_sum(const StrategyStats& a, const StrategyStats& b, const GameInstance& game) {
  check_stats(a, game, Player::A);
  check_stats(b, game, Player::B);
  const auto& part = game.partition();
  double s = 0.0;
  for (std::size_t k = 0; k < game.n(); ++k) {
    switch (part.class_of(k)) {
      case InfoClass::private_a: s += a.q[k] * b.p[k]; break;
      case InfoClass::private_b: s += a.p[k] * b.q[k - part.a]; break;
      default: s += game.expected(k) * a.p[k] * b.p[k]; break;
    }
  }
  return s;
}

/// Reward a player collects ignoring collisions: own q on its private set,
/// E_k p_k elsewhere.
inline double standalone_reward(const StrategyStats& s, const GameInstance& game) {
  const auto priv = game.partition().private_of(s.player);
  double r = 0.0;
  for (std::size_t k = 0; k < game.n(); ++k) {
    r += priv.contains(k) ? s.q[k - priv.begin] : game.expected(k) * s.p[k];
  }
  return r;
}

/// Closed-form E[R^player | z] from both players' stats.
inline double expected_utility(const StrategyStats& self, const StrategyStats& opp, const GameInstance& game,
                               Player player) {
  check_stats(self, game, player);
  check_stats(opp, game, opponent(player));
  const auto& a = player == Player::A ? self : opp;
  const auto& b = player == Player::A ? opp : self;
  return standalone_reward(self, game) - 0.5 * collision_sum(a, b, game);
}

/// Direct simulation of player A's realized payoff
///   W_{alpha^A} (1 - 1/2 [alpha^A == alpha^B]).
inline Estimate simulate_payoff(const Strategy& strategy_a, const Strategy& strategy_b, const GameInstance& game,
                                std::size_t n_samples, RngSpec rng, unsigned threads = 1) {
  if (n_samples < 2) throw std::invalid_argument("simulate_payoff needs at least two samples");
  check_playable(strategy_a, game, Player::A);
  check_playable(strategy_b, game, Player::B);
  const auto part = game.partition();
  auto acc = run_blocks(n_samples, threads, ScalarMoments{},
                        [&](ScalarMoments& m, std::size_t begin, std::size_t end, std::uint64_t block) {
                          Rng world_rng(rng, Lane::world, block);
                          Rng rng_a(rng, Lane::action_a, block);
                          Rng rng_b(rng, Lane::action_b, block);
                          std::vector<double> world(game.n());
                          std::vector<double> view_a(game.n(), 0.0);
                          std::vector<double> view_b(game.n(), 0.0);
                          for (std::size_t s = begin; s < end; ++s) {
                            sample_world(game, world_rng, world);
                            // Each player only sees its own private coordinates.
                            for (std::size_t k = 0; k < part.a; ++k) view_a[k] = world[k];
                            for (std::size_t k = part.a; k < part.a + part.b; ++k) view_b[k] = world[k];
                            const auto ka = choose(strategy_a, view_a, rng_a);
                            const auto kb = choose(strategy_b, view_b, rng_b);
                            m.add(world[ka] * (ka == kb ? 0.5 : 1.0));
                          }
                        });
  return {acc.mean(), acc.stderr_of_mean()};
}

inline Estimate simulate_payoff(const Strategy& strategy_a, const Strategy& strategy_b, const GameInstance& game,
                                const McConfig& mc) {
  return simulate_payoff(strategy_a, strategy_b, game, mc.samples, mc.rng, mc.threads);
}

}  // namespace rsg
