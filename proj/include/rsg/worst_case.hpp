#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "rsg/game.hpp"
#include "rsg/montecarlo.hpp"
#include "rsg/stats.hpp"
#include "rsg/strategy.hpp"

namespace rsg {

/// The opponent that minimizes A's expected utility: B plays argmax_k Lambda_k
/// with Lambda_k = Omega_k q^A_k on A-private k and Omega_k p^A_k elsewhere.
/// As a score strategy for B: constant q^A_k on A-private, weight p^A_k on
/// B-private (multiplying W_k), constant E_k p^A_k on hidden/shared.
///
/// This adversary knows (p^A, q^A) exactly, so the resulting value is a lower
/// bound over every B strategy, including ones B could not actually realize.
inline ScoreStrategy worst_case_response(const StrategyStats& a, const GameInstance& game) {
  check_stats(a, game, Player::A);
  const auto& part = game.partition();
  std::vector<double> w(game.n());
  for (std::size_t k = 0; k < game.n(); ++k) {
    switch (part.class_of(k)) {
      case InfoClass::private_a: w[k] = a.q[k]; break;
      case InfoClass::private_b: w[k] = a.p[k]; break;
      default: w[k] = game.expected(k) * a.p[k]; break;
    }
  }
  return {std::move(w), part.private_b()};
}

struct FValue {
  double value = 0.0;
  double std_error = 0.0;
  /// E[max_j Omega_j x_j].
  double max_mean = 0.0;
  std::size_t samples = 0;
};

/// Packs A's stats into the objective's argument: q on A-private, p elsewhere.
inline std::vector<double> objective_point(const StrategyStats& a, const GameInstance& game) {
  check_stats(a, game, Player::A);
  std::vector<double> x = a.p;
  for (std::size_t k = 0; k < a.q.size(); ++k) x[k] = a.q[k];
  return x;
}

namespace detail {

inline double linear_part(std::span<const double> x, const GameInstance& game) {
  const auto priv = game.partition().private_a();
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += priv.contains(k) ? x[k] : game.expected(k) * x[k];
  return s;
}

}  // namespace detail

/// f(x) = sum_A x_k + sum_{A^c} E_k x_k - 1/2 E[max_j Omega_j x_j].
/// Exact when B has no private resources (Omega deterministic).
inline FValue evaluate_f(std::span<const double> x, const GameInstance& game, const McConfig& mc = {}) {
  if (x.size() != game.n()) throw std::invalid_argument("evaluate_f: wrong dimension");
  for (double v : x) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("evaluate_f: entries must be finite and >= 0");
  }
  FValue out;
  const double lin = detail::linear_part(x, game);
  const auto& part = game.partition();
  if (part.b == 0) {
    const auto omega = deterministic_omega(game);
    double m = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) m = std::max(m, omega[k] * x[k]);
    out.max_mean = m;
    out.value = lin - 0.5 * m;
    return out;
  }
  if (mc.samples < 2) throw std::invalid_argument("evaluate_f needs at least two samples");

  // Only B-private coordinates of Omega are random; fold the rest into one constant.
  const auto pb = part.private_b();
  double fixed_max = 0.0;
  const auto omega0 = [&] {
    std::vector<double> w(game.n());
    for (std::size_t k = 0; k < game.n(); ++k) w[k] = part.private_a().contains(k) ? 1.0 : game.expected(k);
    return w;
  }();
  for (std::size_t k = 0; k < game.n(); ++k) {
    if (!pb.contains(k)) fixed_max = std::max(fixed_max, omega0[k] * x[k]);
  }
  auto acc = run_blocks(mc.samples, mc.threads, ScalarMoments{},
                        [&](ScalarMoments& m, std::size_t begin, std::size_t end, std::uint64_t block) {
                          Rng omega_rng(mc.rng, Lane::omega, block);
                          for (std::size_t s = begin; s < end; ++s) {
                            double v = fixed_max;
                            for (std::size_t k = pb.begin; k < pb.end(); ++k) {
                              v = std::max(v, game.distribution(k).sample(omega_rng) * x[k]);
                            }
                            m.add(v);
                          }
                        });
  out.max_mean = acc.mean();
  out.std_error = 0.5 * acc.stderr_of_mean();
  out.samples = mc.samples;
  out.value = lin - 0.5 * out.max_mean;
  return out;
}

struct WorstCaseEval {
  double value = 0.0;
  /// From the max-term only; A's own stats carry their own errors.
  double std_error = 0.0;
  std::size_t mc_samples = 0;
  /// E[max_k Lambda_k].
  double lambda_max_mean = 0.0;
  StrategyStats stats;
};

/// A's expected utility against the worst-case opponent.
inline WorstCaseEval worst_case_utility(const Strategy& strategy_a, const GameInstance& game, const McConfig& mc = {}) {
  WorstCaseEval out;
  McConfig stats_mc = mc;
  stats_mc.rng = substream(mc.rng, 0);
  out.stats = estimate_stats(strategy_a, game, Player::A, stats_mc);
  const auto x = objective_point(out.stats, game);
  McConfig omega_mc = mc;
  omega_mc.rng = substream(mc.rng, 1);
  const auto f = evaluate_f(x, game, omega_mc);
  out.value = f.value;
  out.std_error = f.std_error;
  out.mc_samples = f.samples;
  out.lambda_max_mean = f.max_mean;
  return out;
}

}  // namespace rsg
