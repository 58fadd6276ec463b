#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "rsg/strategy.hpp"

namespace rsg {

/// sum_k p_k E_k - 1/2 max_k p_k E_k, the worst-case utility when neither
/// player observes anything.
inline double objective_p2(std::span<const double> p, std::span<const double> e) {
  if (p.size() != e.size()) throw std::invalid_argument("objective_p2: dimension mismatch");
  detail::check_simplex(p, "objective_p2", 1e-6);
  double lin = 0.0;
  double mx = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (!(e[k] >= 0.0)) throw std::invalid_argument("objective_p2: negative mean");
    lin += p[k] * e[k];
    mx = std::max(mx, p[k] * e[k]);
  }
  return lin - 0.5 * mx;
}

struct ExplicitSolution {
  std::vector<double> p;
  /// Number of resources played with positive probability.
  std::size_t support = 0;
  /// sum of 1/E over the support.
  double inverse_sum = 0.0;
  double value = 0.0;
  /// order[i] is the input index of the i-th largest mean (stable on ties).
  std::vector<std::size_t> order;
};

/// Closed-form maximizer of objective_p2. Means are sorted descending, the
/// support size r maximizes (r - 1/2) / sum_{j<=r} 1/E_(j) (lowest r on ties),
/// and each supported resource gets p_k = 1 / (E_k S_r), which equalizes
/// p_k E_k across the support. Zero means never receive mass.
inline ExplicitSolution explicit_solution(std::span<const double> e) {
  if (e.empty()) throw std::invalid_argument("explicit_solution: empty mean vector");
  bool any_positive = false;
  for (double v : e) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("explicit_solution: means must be >= 0");
    any_positive = any_positive || v > 0.0;
  }
  if (!any_positive) throw std::invalid_argument("explicit_solution: all means are zero");

  ExplicitSolution sol;
  sol.order.resize(e.size());
  std::iota(sol.order.begin(), sol.order.end(), 0);
  std::stable_sort(sol.order.begin(), sol.order.end(), [&](std::size_t i, std::size_t j) { return e[i] > e[j]; });

  double s = 0.0;
  double best = -1.0;
  double best_s = 0.0;
  std::size_t r = 0;
  for (std::size_t k = 0; k < e.size() && e[sol.order[k]] > 0.0; ++k) {
    s += 1.0 / e[sol.order[k]];
    const double ratio = (static_cast<double>(k + 1) - 0.5) / s;
    // Relative slack keeps exact ties (e.g. E = (2, 1)) at the lower index.
    if (ratio > best * (1.0 + 1e-12)) {
      best = ratio;
      best_s = s;
      r = k + 1;
    }
  }
  sol.support = r;
  sol.inverse_sum = best_s;
  sol.p.assign(e.size(), 0.0);
  for (std::size_t k = 0; k < r; ++k) sol.p[sol.order[k]] = 1.0 / (e[sol.order[k]] * best_s);
  sol.value = objective_p2(sol.p, e);
  return sol;
}

}  // namespace rsg
