#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "rsg/game.hpp"
#include "rsg/montecarlo.hpp"
#include "rsg/rng.hpp"
#include "rsg/strategy.hpp"

// Multiplicative-weights mirror descent on the simplex for the case where A
// observes nothing, so the worst-case objective depends on p alone.

namespace rsg::md {

struct Config {
  double alpha = 50.0;
  std::size_t T = 10000;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("md: alpha must be positive");
    if (T < 1) throw std::invalid_argument("md: T must be at least 1");
  }
};

/// Subgradient of the negated per-sample objective:
///   -E_j + 1/2 [j = argmax_k p_k Omega_k] Omega_j, lowest index on ties.
inline std::vector<double> md_subgradient(std::span<const double> p, std::span<const double> omega,
                                          std::span<const double> e) {
  if (p.size() != omega.size() || p.size() != e.size() || p.empty()) {
    throw std::invalid_argument("md_subgradient: dimension mismatch");
  }
  std::size_t top = 0;
  for (std::size_t k = 1; k < p.size(); ++k) {
    if (p[k] * omega[k] > p[top] * omega[top]) top = k;
  }
  std::vector<double> g(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) g[j] = -e[j] + (j == top ? 0.5 * omega[j] : 0.0);
  return g;
}

/// p_k <- p_k exp(-grad_k / alpha), renormalized. Works in log space with
/// exponents shifted by their maximum.
inline std::vector<double> md_step(std::span<const double> p, std::span<const double> grad, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("md_step: alpha must be positive");
  if (p.size() != grad.size() || p.empty()) throw std::invalid_argument("md_step: dimension mismatch");
  std::vector<double> lw(p.size());
  double top = -HUGE_VAL;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (!(p[k] > 0.0)) throw std::invalid_argument("md_step: p must be strictly positive");
    lw[k] = std::log(p[k]) - grad[k] / alpha;
    top = std::max(top, lw[k]);
  }
  double s = 0.0;
  for (auto& v : lw) {
    v = std::exp(v - top);
    s += v;
  }
  for (auto& v : lw) v /= s;
  return lw;
}

struct Result {
  /// (1/T) sum_{t<T} p(t), including the uniform start.
  std::vector<double> p;
  /// Smallest entry over all iterates.
  double min_entry = 1.0;
  /// Largest |sum p(t) - 1| over all iterates.
  double sum_drift = 0.0;
};

inline Result run_md(const GameInstance& game, const Config& config) {
  config.validate();
  if (game.partition().a != 0) throw std::invalid_argument("run_md: A must have no private resources");
  const std::size_t n = game.n();
  const auto& e = game.expected();
  Rng omega_rng(RngSpec{config.seed, 0}, Lane::omega);
  std::vector<double> omega(e.begin(), e.end());
  const auto pb = game.partition().private_b();

  Result res;
  std::vector<double> p(n, 1.0 / static_cast<double>(n));
  res.p.assign(n, 0.0);
  for (std::size_t t = 0; t < config.T; ++t) {
    for (std::size_t k = 0; k < n; ++k) res.p[k] += p[k];
    for (std::size_t k = pb.begin; k < pb.end(); ++k) omega[k] = game.distribution(k).sample(omega_rng);
    p = md_step(p, md_subgradient(p, omega, e), config.alpha);
    double s = 0.0;
    for (double v : p) {
      res.min_entry = std::min(res.min_entry, v);
      s += v;
    }
    res.sum_drift = std::max(res.sum_drift, std::abs(s - 1.0));
  }
  for (auto& v : res.p) v /= static_cast<double>(config.T);
  return res;
}

struct ErrorBound {
  double value = 0.0;
  /// 2 ||E||_inf^2 + 1/2 E||Omega||_inf^2.
  double C = 0.0;
  /// Nonzero only when E||Omega||_inf^2 had to be estimated.
  double C_std_error = 0.0;
};

/// E[max_k Omega_k^2]. Closed form when at most one coordinate is random:
/// c^2 F(c) + E[W^2; W > c] with c the largest constant coordinate.
/// Otherwise estimated with `samples` draws.
inline Estimate omega_sup_second_moment(const GameInstance& game, std::size_t samples = 1000000, RngSpec rng = {}) {
  const auto& part = game.partition();
  const auto pb = part.private_b();
  double c = 0.0;
  for (std::size_t k = 0; k < game.n(); ++k) {
    if (!pb.contains(k)) c = std::max(c, part.private_a().contains(k) ? 1.0 : game.expected(k));
  }
  if (part.b == 0) return {c * c, 0.0};
  if (part.b == 1) {
    const auto& w = game.distribution(pb.begin);
    return {c * c * w.cdf(c) + w.upper_second_moment(c), 0.0};
  }
  auto acc = run_blocks(samples, 1, ScalarMoments{},
                        [&](ScalarMoments& m, std::size_t begin, std::size_t end, std::uint64_t block) {
                          Rng r(rng, Lane::omega, block);
                          for (std::size_t s = begin; s < end; ++s) {
                            double v = c;
                            for (std::size_t k = pb.begin; k < pb.end(); ++k) {
                              v = std::max(v, game.distribution(k).sample(r));
                            }
                            m.add(v * v);
                          }
                        });
  return {acc.mean(), acc.stderr_of_mean()};
}

/// C / (2 alpha) + alpha ln(n) / T.
inline ErrorBound md_error_bound(const GameInstance& game, double alpha, std::size_t T, RngSpec rng = {}) {
  if (!(alpha > 0.0)) throw std::invalid_argument("md_error_bound: alpha must be positive");
  if (T < 1) throw std::invalid_argument("md_error_bound: T must be at least 1");
  double emax = 0.0;
  for (double v : game.expected()) emax = std::max(emax, v);
  const auto om = omega_sup_second_moment(game, 1000000, rng);
  ErrorBound b;
  b.C = 2.0 * emax * emax + 0.5 * om.mean;
  b.C_std_error = 0.5 * om.std_error;
  b.value = b.C / (2.0 * alpha) + alpha * std::log(static_cast<double>(game.n())) / static_cast<double>(T);
  return b;
}

}  // namespace rsg::md
