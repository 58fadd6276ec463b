#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <stdexcept>
#include <vector>

#include "rsg/distribution.hpp"
#include "rsg/game.hpp"
#include "rsg/montecarlo.hpp"
#include "rsg/rng.hpp"
#include "rsg/strategy.hpp"
#include "rsg/worst_case.hpp"

// The case where A privately observes exactly resource 1 and W_1 has a
// continuous law. Any A strategy that picks resource 1 with probability p_1
// collects at most p_1 times the upper-p_1 tail mean there, and a quantile
// threshold attains it, so the problem reduces to one over the simplex.

namespace rsg::a1 {

/// p1 * E[W | F(W) >= 1 - p1]. For exponential(rate 1) this is p(1 - ln p).
inline double tail_weighted_mean(const RewardDistribution& dist, double p1) {
  if (!dist.continuous()) throw std::invalid_argument("tail_weighted_mean: distribution must have a continuous CDF");
  if (!(p1 >= 0.0 && p1 <= 1.0)) throw std::invalid_argument("tail_weighted_mean: p1 must lie in [0,1]");
  if (p1 == 0.0) return 0.0;
  return p1 * dist.tail_mean(p1);
}

class TailFrontier {
 public:
  explicit TailFrontier(RewardDistribution dist) : dist_(std::move(dist)) {
    if (!dist_.continuous()) throw std::invalid_argument("TailFrontier: distribution must have a continuous CDF");
  }

  double operator()(double p1) const { return tail_weighted_mean(dist_, p1); }
  double threshold(double p1) const { return dist_.quantile(1.0 - p1); }

  /// Central difference of width h, one-sided at the ends of [0, 1].
  double derivative(double p1, double h = 1e-4) const {
    const double lo = std::max(0.0, p1 - h);
    const double hi = std::min(1.0, p1 + h);
    return ((*this)(hi) - (*this)(lo)) / (hi - lo);
  }

  const RewardDistribution& distribution() const { return dist_; }

 private:
  RewardDistribution dist_;
};

namespace detail {

inline void require_a1(const GameInstance& game, const char* what) {
  if (game.partition().a != 1) throw std::invalid_argument(std::string(what) + ": A must have exactly one private resource");
}

}  // namespace detail

/// Pick resource 1 iff W_1 >= quantile(1 - p1), otherwise draw from p_{2:n}/(1 - p1).
inline QuantileThresholdStrategy build_strategy_a1(std::span<const double> p, const GameInstance& game) {
  detail::require_a1(game, "build_strategy_a1");
  if (p.size() != game.n()) throw std::invalid_argument("build_strategy_a1: wrong dimension");
  rsg::detail::check_simplex(p, "build_strategy_a1");
  const auto& dist = game.distribution(0);
  if (!dist.continuous()) throw std::invalid_argument("build_strategy_a1: W_1 must have a continuous CDF");
  const double p1 = std::clamp(p[0], 0.0, 1.0);
  const double rest = 1.0 - p1;
  std::vector<double> tail(p.size() - 1);
  if (rest > 1e-12) {
    for (std::size_t k = 1; k < p.size(); ++k) tail[k - 1] = std::max(p[k], 0.0) / rest;
    double s = 0.0;
    for (double v : tail) s += v;
    for (auto& v : tail) v /= s;
  } else if (!tail.empty()) {
    std::fill(tail.begin(), tail.end(), 1.0 / static_cast<double>(tail.size()));
  }
  // quantile(0) is the bottom of the support, so p1 = 1 always picks resource 1.
  return make_quantile_threshold(dist.quantile(rest), std::move(tail));
}

struct P5Config {
  double alpha = 50.0;
  std::size_t T = 10000;
  double delta = 1e-3;
  double fd_width = 1e-4;
  std::uint64_t seed = 0;
  /// Monte Carlo samples for the final value when B has private resources.
  std::size_t eval_samples = 200000;

  void validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("p5: alpha must be positive");
    if (T < 1) throw std::invalid_argument("p5: T must be at least 1");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("p5: delta must lie in (0,1)");
    if (!(fd_width > 0.0 && fd_width < delta)) throw std::invalid_argument("p5: fd_width must lie in (0, delta)");
  }
};

struct P5Result {
  std::vector<double> p;
  double value = 0.0;
  double std_error = 0.0;
};

/// Objective point (q(p1), p_2, ..., p_n).
inline std::vector<double> p5_point(std::span<const double> p, const TailFrontier& q) {
  std::vector<double> x(p.begin(), p.end());
  x[0] = q(p[0]);
  return x;
}

/// Mirror descent on {p in simplex : p_1 >= delta} for f(q(p_1), p_{2:n}).
/// Iterates that fall below delta are projected back in KL geometry, which
/// sets p_1 = delta and rescales the rest. The output is whichever of the
/// full average and the second-half average scores higher.
inline P5Result solve_p5(const GameInstance& game, const P5Config& config = {}) {
  detail::require_a1(game, "solve_p5");
  config.validate();
  const TailFrontier q(game.distribution(0));
  const std::size_t n = game.n();
  if (n == 1) return {{1.0}, q(1.0), 0.0};

  const auto& part = game.partition();
  const auto pb = part.private_b();
  Rng omega_rng(RngSpec{config.seed, 0}, Lane::omega);
  std::vector<double> omega(n);
  for (std::size_t k = 0; k < n; ++k) omega[k] = k == 0 ? 1.0 : game.expected(k);

  std::vector<double> p(n, 1.0 / static_cast<double>(n));
  std::vector<double> lw(n);
  std::vector<double> sum_all(n, 0.0);
  std::vector<double> sum_late(n, 0.0);
  for (std::size_t t = 0; t < config.T; ++t) {
    for (std::size_t k = 0; k < n; ++k) {
      sum_all[k] += p[k];
      if (t >= config.T / 2) sum_late[k] += p[k];
    }
    for (std::size_t k = pb.begin; k < pb.end(); ++k) omega[k] = game.distribution(k).sample(omega_rng);

    const double x1 = q(p[0]);
    std::size_t top = 0;
    double best = x1;
    for (std::size_t k = 1; k < n; ++k) {
      if (omega[k] * p[k] > best) {
        best = omega[k] * p[k];
        top = k;
      }
    }
    double mx = -HUGE_VAL;
    for (std::size_t k = 0; k < n; ++k) {
      // Gradient of the negated objective.
      const double g = k == 0 ? -(1.0 - (top == 0 ? 0.5 : 0.0)) * q.derivative(p[0], config.fd_width)
                              : -game.expected(k) + (top == k ? 0.5 * omega[k] : 0.0);
      lw[k] = std::log(p[k]) - g / config.alpha;
      mx = std::max(mx, lw[k]);
    }
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      p[k] = std::exp(lw[k] - mx);
      s += p[k];
    }
    for (auto& v : p) v /= s;
    if (p[0] < config.delta) {
      const double scale = (1.0 - config.delta) / (1.0 - p[0]);
      for (std::size_t k = 1; k < n; ++k) p[k] *= scale;
      p[0] = config.delta;
    }
  }

  McConfig mc;
  mc.samples = config.eval_samples;
  mc.rng = substream(RngSpec{config.seed, 0}, 1);
  auto score = [&](std::vector<double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    for (auto& x : v) x /= s;
    const auto f = evaluate_f(p5_point(v, q), game, mc);
    return P5Result{std::move(v), f.value, f.std_error};
  };
  auto all = score(sum_all);
  auto late = score(sum_late);
  return late.value > all.value ? late : all;
}

}  // namespace rsg::a1
