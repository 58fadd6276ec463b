#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "rsg/game.hpp"
#include "rsg/rng.hpp"
#include "rsg/strategy.hpp"

// Drift-plus-penalty construction of a worst-case-optimal mixed strategy for
// player A. Each iteration takes one projected online-gradient step on the
// auxiliary vector gamma, plays the threshold strategy weighted by the virtual
// queues Q, and updates Q. The output is the equiprobable mixture of the T
// threshold strategies that were played.

namespace rsg::dpp {

struct Config {
  double V = 200.0;
  double alpha = 4.0e4;
  std::size_t T = 100000;
  std::uint64_t seed = 0;
  bool record_diagnostics = false;

  void validate() const {
    if (!(V > 0.0) || !std::isfinite(V)) throw std::invalid_argument("dpp: V must be positive");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("dpp: alpha must be positive");
    if (alpha < V * V) throw std::invalid_argument("dpp: alpha must be at least V^2");
    if (T < 1) throw std::invalid_argument("dpp: T must be at least 1");
  }
};

/// Heuristic mapping from a target accuracy to (V, alpha, T) = (1/eps, 1/eps^2, 1/eps^2).
inline Config config_for_epsilon(double epsilon, std::uint64_t seed = 0) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("dpp: epsilon must be positive");
  Config c;
  c.V = 1.0 / epsilon;
  c.alpha = std::max(c.V * c.V, 1.0 / (epsilon * epsilon));
  c.T = static_cast<std::size_t>(std::ceil(1.0 / (epsilon * epsilon)));
  c.seed = seed;
  return c;
}

struct State {
  std::vector<double> Q;
  std::vector<double> gamma;
  std::size_t t = 0;
};

/// Box bounds of gamma: E_j on A-private resources, 1 elsewhere.
inline std::vector<double> box_bounds(const GameInstance& game) {
  std::vector<double> u(game.n(), 1.0);
  for (std::size_t k = 0; k < game.partition().a; ++k) u[k] = game.expected(k);
  return u;
}

/// Sample-path queue bound, valid whenever alpha >= V^2:
///   A-private:  (1 + 2 sqrt2 E_j) sqrt(alpha) + E_j
///   otherwise:  (E_j + 2 sqrt2) sqrt(alpha) + 1
inline std::vector<double> queue_bound(const GameInstance& game, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("queue_bound: alpha must be positive");
  const double ra = std::sqrt(alpha);
  const double r2 = 2.0 * std::sqrt(2.0);
  std::vector<double> b(game.n());
  for (std::size_t j = 0; j < game.n(); ++j) {
    const double e = game.expected(j);
    b[j] = j < game.partition().a ? (1.0 + r2 * e) * ra + e : (e + r2) * ra + 1.0;
  }
  return b;
}

inline std::size_t argmax_weighted(std::span<const double> x, std::span<const double> omega) {
  std::size_t best = 0;
  double best_v = x[0] * omega[0];
  for (std::size_t k = 1; k < x.size(); ++k) {
    const double v = x[k] * omega[k];
    if (v > best_v) {
      best_v = v;
      best = k;
    }
  }
  return best;
}

/// Subgradient of the per-sample objective at gamma:
///   A-private j:  1 - 1/2 [j = argmax_k gamma_k Omega_k]
///   otherwise:    E_j - 1/2 [j = argmax] Omega_j
inline std::vector<double> ft_subgradient(std::span<const double> gamma, std::span<const double> omega,
                                          const GameInstance& game) {
  if (gamma.size() != game.n() || omega.size() != game.n()) {
    throw std::invalid_argument("ft_subgradient: dimension mismatch");
  }
  const std::size_t top = argmax_weighted(gamma, omega);
  std::vector<double> g(game.n());
  for (std::size_t j = 0; j < game.n(); ++j) {
    const double hit = j == top ? 0.5 : 0.0;
    g[j] = j < game.partition().a ? 1.0 - hit : game.expected(j) - hit * omega[j];
  }
  return g;
}

/// Closed-form minimizer of the separable proximal step over the box:
///   gamma_j = clamp(gamma_prev_j - (-V grad_j + Q_j) / (2 alpha), 0, u_j).
inline std::vector<double> gamma_step(std::span<const double> gamma_prev, std::span<const double> Q,
                                      std::span<const double> grad, double V, double alpha, const GameInstance& game) {
  const auto u = box_bounds(game);
  std::vector<double> g(gamma_prev.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    g[j] = std::clamp(gamma_prev[j] - (-V * grad[j] + Q[j]) / (2.0 * alpha), 0.0, u[j]);
  }
  return g;
}

inline std::vector<double> gamma_step(std::span<const double> gamma_prev, std::span<const double> Q,
                                      std::span<const double> grad, const Config& config, const GameInstance& game) {
  return gamma_step(gamma_prev, Q, grad, config.V, config.alpha, game);
}

/// Q_j <- max(Q_j + gamma_j - served_j, 0), where served_j is X_j on an
/// A-private chosen resource, 1 on any other chosen resource, 0 otherwise.
/// `world_x` holds (at least) the A-private realizations.
inline std::vector<double> queue_step(std::span<const double> Q, std::span<const double> gamma, std::size_t action,
                                      std::span<const double> world_x, const GameInstance& game) {
  if (action >= game.n()) throw std::invalid_argument("queue_step: action out of range");
  std::vector<double> next(Q.size());
  for (std::size_t j = 0; j < Q.size(); ++j) {
    double served = 0.0;
    if (j == action) served = j < game.partition().a ? world_x[j] : 1.0;
    next[j] = std::max(Q[j] + gamma[j] - served, 0.0);
  }
  return next;
}

/// Threshold strategy for queue vector Q: argmax of Q_j X_j on A-private and Q_j elsewhere.
inline ScoreStrategy threshold_strategy(std::span<const double> Q, const GameInstance& game) {
  return {std::vector<double>(Q.begin(), Q.end()), game.partition().private_a()};
}

struct IterationRecord {
  std::size_t t = 0;
  double max_queue = 0.0;
  std::size_t action = 0;
};

struct Diagnostics {
  std::vector<double> queue_bound;
  /// Largest Q_j(t) seen over the run, per resource.
  std::vector<double> queue_max;
  /// Number of (t, j) with Q_j(t) above the queue bound.
  std::size_t bound_violations = 0;
  /// Number of (t, j) with Q_j(t+1) > Q_j(t) + u_j.
  std::size_t step_violations = 0;
  /// Number of (t, j) with gamma_j(t) outside [0, u_j].
  std::size_t box_violations = 0;
  /// (1/T) sum_t x(t): X_j 1{a(t)=j} on A-private, 1{a(t)=j} elsewhere.
  std::vector<double> average_x;
  State final_state;
  /// Filled only when record_diagnostics is set.
  std::vector<IterationRecord> iterations;
};

struct Result {
  MixtureStrategy mixture;
  Diagnostics diagnostics;
};

/// Runs T iterations. Q(1) = gamma(0) = 0, so the first component always
/// picks resource 1 by the lowest-index tie rule.
inline Result run(const GameInstance& game, const Config& config) {
  config.validate();
  const std::size_t n = game.n();
  const auto& part = game.partition();
  const auto u = box_bounds(game);
  const RngSpec spec{config.seed, 0};
  Rng x_rng(spec, Lane::world);
  Rng omega_rng(spec, Lane::omega);

  Result res;
  auto& diag = res.diagnostics;
  diag.queue_bound = queue_bound(game, config.alpha);
  diag.queue_max.assign(n, 0.0);
  diag.average_x.assign(n, 0.0);
  res.mixture.components.reserve(config.T);
  if (config.record_diagnostics) diag.iterations.reserve(config.T);

  State st{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), 0};
  std::vector<double> x(n, 0.0);
  std::vector<double> omega(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) omega[k] = part.private_a().contains(k) ? 1.0 : game.expected(k);

  for (std::size_t t = 1; t <= config.T; ++t) {
    st.t = t;
    for (std::size_t k = 0; k < part.a; ++k) x[k] = game.distribution(k).sample(x_rng);
    for (std::size_t k = part.a; k < part.a + part.b; ++k) omega[k] = game.distribution(k).sample(omega_rng);

    double qmax = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (st.Q[j] > diag.queue_bound[j]) ++diag.bound_violations;
      diag.queue_max[j] = std::max(diag.queue_max[j], st.Q[j]);
      qmax = std::max(qmax, st.Q[j]);
    }

    const auto grad = ft_subgradient(st.gamma, omega, game);
    st.gamma = gamma_step(st.gamma, st.Q, grad, config, game);
    for (std::size_t j = 0; j < n; ++j) {
      if (st.gamma[j] < 0.0 || st.gamma[j] > u[j]) ++diag.box_violations;
    }

    res.mixture.components.push_back(threshold_strategy(st.Q, game));
    const std::size_t action = detail::argmax_score(res.mixture.components.back(), x);
    diag.average_x[action] += action < part.a ? x[action] : 1.0;

    auto next = queue_step(st.Q, st.gamma, action, x, game);
    for (std::size_t j = 0; j < n; ++j) {
      if (next[j] > st.Q[j] + u[j] * (1.0 + 1e-12)) ++diag.step_violations;
    }
    if (config.record_diagnostics) diag.iterations.push_back({t, qmax, action});
    st.Q = std::move(next);
  }
  for (auto& v : diag.average_x) v /= static_cast<double>(config.T);
  diag.final_state = std::move(st);
  return res;
}

/// Writes one row per iteration: t, max_j Q_j(t), action (1-based).
inline void write_diagnostics_csv(std::ostream& os, const Diagnostics& diag) {
  os << "t,max_queue,action\n";
  char buf[64];
  for (const auto& r : diag.iterations) {
    std::snprintf(buf, sizeof buf, "%.9g", r.max_queue);
    os << r.t << ',' << buf << ',' << (r.action + 1) << '\n';
  }
}

struct BoundConstants {
  double D1 = 0.0;
  double D2 = 0.0;
  double D3 = 0.0;
  /// Full error term of the performance guarantee at (V, alpha, T).
  double rhs = 0.0;
};

/// Constants of the performance guarantee. E||Omega||^2 is exact: Omega is 1
/// on A-private, W on B-private (second moment) and E elsewhere.
inline BoundConstants bound_constants(const GameInstance& game, const Config& config) {
  const auto& part = game.partition();
  const double n = static_cast<double>(game.n());
  const double a = static_cast<double>(part.a);
  BoundConstants c;
  double sum_a_e2 = 0.0;
  double sum_a_w2 = 0.0;
  double sum_ac_e2 = 0.0;
  double omega_sq = 0.0;
  for (std::size_t k = 0; k < game.n(); ++k) {
    const double e = game.expected(k);
    switch (part.class_of(k)) {
      case InfoClass::private_a:
        sum_a_e2 += e * e;
        sum_a_w2 += game.distribution(k).second_moment();
        omega_sq += 1.0;
        break;
      case InfoClass::private_b:
        sum_ac_e2 += e * e;
        omega_sq += game.distribution(k).second_moment();
        break;
      default:
        sum_ac_e2 += e * e;
        omega_sq += e * e;
        break;
    }
  }
  c.D1 = n - a + 0.5 * (sum_a_e2 + sum_a_w2);
  c.D2 = 4.0 * a + omega_sq + 4.0 * sum_ac_e2;
  c.D3 = n - a + sum_a_e2;

  const double V = config.V;
  const double al = config.alpha;
  const double T = static_cast<double>(config.T);
  const double ra = std::sqrt(al);
  const double r2a = 2.0 * std::sqrt(2.0 * al) + 1.0;
  double tail = 0.0;
  for (std::size_t k = 0; k < game.n(); ++k) {
    const double e = game.expected(k);
    tail += k < part.a ? ra + e * r2a : e * e * ra + e * r2a;
  }
  c.rhs = c.D1 / V + V * c.D2 / (16.0 * al) + al * c.D3 / (V * T) + 1.5 * tail / T;
  return c;
}

}  // namespace rsg::dpp
