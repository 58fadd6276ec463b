#pragma once

#include <cmath>
#include <stdexcept>
#include <variant>
#include <vector>

#include "rsg/game.hpp"
#include "rsg/montecarlo.hpp"
#include "rsg/stats.hpp"
#include "rsg/strategy.hpp"
#include "rsg/utility.hpp"

namespace rsg {

/// Best response of `player` to an opponent described by `opp`:
///   own private k:       weight (1 - p^opp_k / 2) on W_k
///   opponent-private k:  constant E_k - q^opp_k / 2
///   hidden / shared k:   constant E_k (1 - p^opp_k / 2)
inline ScoreStrategy best_response(Player player, const StrategyStats& opp, const GameInstance& game) {
  check_stats(opp, game, opponent(player));
  const auto own = game.partition().private_of(player);
  const auto theirs = game.partition().private_of(opponent(player));
  std::vector<double> w(game.n());
  for (std::size_t k = 0; k < game.n(); ++k) {
    if (own.contains(k)) {
      w[k] = 1.0 - 0.5 * opp.p[k];
    } else if (theirs.contains(k)) {
      w[k] = game.expected(k) - 0.5 * opp.q[k - theirs.begin];
    } else {
      w[k] = game.expected(k) * (1.0 - 0.5 * opp.p[k]);
    }
    w[k] = std::max(w[k], 0.0);
  }
  return {std::move(w), own};
}

/// Potential of the game. Any unilateral change of strategy moves it by
/// exactly the deviating player's utility change. Bounded by 2 sum_k E_k.
inline double potential(const StrategyStats& a, const StrategyStats& b, const GameInstance& game) {
  check_stats(a, game, Player::A);
  check_stats(b, game, Player::B);
  const auto& part = game.partition();
  // Extended precision so that mathematically tied profiles round to the same double.
  long double h = 0.0L;
  for (std::size_t k = 0; k < game.n(); ++k) {
    const long double e = game.expected(k);
    switch (part.class_of(k)) {
      case InfoClass::private_a:
        h += a.q[k] + e * b.p[k] - 0.5L * a.q[k] * b.p[k];
        break;
      case InfoClass::private_b:
        h += b.q[k - part.a] + e * a.p[k] - 0.5L * a.p[k] * b.q[k - part.a];
        break;
      default:
        h += e * (static_cast<long double>(a.p[k]) + b.p[k]) - 0.5L * e * a.p[k] * b.p[k];
        break;
    }
  }
  return static_cast<double>(h);
}

struct EquilibriumStep {
  Player updated = Player::A;
  double potential = 0.0;
  double utility_a = 0.0;
  double utility_b = 0.0;
  /// Estimated gain of the best response over the current strategy (CRN).
  double improvement = 0.0;
  bool adopted = false;
};

struct EquilibriumReport {
  Strategy strategy_a;
  Strategy strategy_b;
  StrategyStats stats_a;
  StrategyStats stats_b;
  double initial_potential = 0.0;
  std::vector<EquilibriumStep> trace;
  std::size_t iterations = 0;
  std::size_t iteration_budget = 0;
  bool converged = false;
  bool exact = false;
};

/// ceil(2 sum E / epsilon) + 1.
inline std::size_t best_response_iteration_budget(const GameInstance& game, double epsilon) {
  return static_cast<std::size_t>(std::ceil(2.0 * game.total_expected() / epsilon)) + 1;
}

/// Iterative best response from uniform play, A moving first. A step's best
/// response is adopted when it improves the mover's utility estimate, or ties
/// it without lowering the potential, so an indifferent mover still switches to
/// the lowest-index best response;
/// the loop ends once both players in turn fail to improve by more than
/// epsilon. Stats are exact when neither player has private resources,
/// otherwise estimated with `mc.samples` worlds, the current and candidate
/// strategies sharing one random stream per step.
inline EquilibriumReport iterate_best_response(const GameInstance& game, double epsilon, const McConfig& mc = {}) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const auto& part = game.partition();

  EquilibriumReport rep{uniform_simplex(game.n()), uniform_simplex(game.n()), {}, {}, 0.0, {}, 0, 0, false, false};
  rep.exact = part.a == 0 && part.b == 0;
  rep.stats_a = estimate_stats(rep.strategy_a, game, Player::A, mc);
  rep.stats_b = estimate_stats(rep.strategy_b, game, Player::B, mc);
  rep.initial_potential = potential(rep.stats_a, rep.stats_b, game);
  rep.iteration_budget = best_response_iteration_budget(game, epsilon);

  int quiet = 0;
  for (std::size_t it = 0; it < rep.iteration_budget; ++it) {
    const Player mover = it % 2 == 0 ? Player::A : Player::B;
    Strategy& current = mover == Player::A ? rep.strategy_a : rep.strategy_b;
    StrategyStats& current_stats = mover == Player::A ? rep.stats_a : rep.stats_b;
    const StrategyStats& opp_stats = mover == Player::A ? rep.stats_b : rep.stats_a;

    Strategy candidate = best_response(mover, opp_stats, game);
    McConfig step = mc;
    step.rng = substream(mc.rng, it);
    const StrategyStats before = current_stats.exact() ? current_stats : estimate_stats(current, game, mover, step);
    StrategyStats after = estimate_stats(candidate, game, mover, step);

    EquilibriumStep s;
    s.updated = mover;
    s.improvement =
        expected_utility(after, opp_stats, game, mover) - expected_utility(before, opp_stats, game, mover);
    const double h_before = potential(rep.stats_a, rep.stats_b, game);
    bool adopt = s.improvement > 0.0;
    if (s.improvement == 0.0) {
      const auto& cand_a = mover == Player::A ? after : rep.stats_a;
      const auto& cand_b = mover == Player::A ? rep.stats_b : after;
      adopt = potential(cand_a, cand_b, game) >= h_before;
    }
    if (adopt) {
      current = std::move(candidate);
      current_stats = std::move(after);
      s.adopted = true;
    }
    s.potential = adopt ? potential(rep.stats_a, rep.stats_b, game) : h_before;
    s.utility_a = expected_utility(rep.stats_a, rep.stats_b, game, Player::A);
    s.utility_b = expected_utility(rep.stats_b, rep.stats_a, game, Player::B);
    rep.trace.push_back(s);
    rep.iterations = it + 1;

    quiet = s.improvement <= epsilon ? quiet + 1 : 0;
    if (quiet >= 2) {
      rep.converged = true;
      break;
    }
  }
  return rep;
}

}  // namespace rsg
