#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rsg/rng.hpp"

namespace rsg {

struct Exponential {
  double rate;
};

struct Uniform {
  double lo;
  double hi;
};

struct PointMass {
  double value;
};

/// Finite support. Atoms are kept sorted by value with probabilities summing to 1.
struct Discrete {
  std::vector<double> values;
  std::vector<double> probs;
};

/// Reward law of one resource. Support is always non-negative with finite
/// first and second moments.
class RewardDistribution {
 public:
  using Kind = std::variant<Exponential, Uniform, PointMass, Discrete>;

  RewardDistribution(Kind kind) : kind_(std::move(kind)) { validate(); }  // NOLINT

  static RewardDistribution exponential(double rate) { return {Exponential{rate}}; }
  static RewardDistribution exponential_mean(double mean) { return {Exponential{1.0 / mean}}; }
  static RewardDistribution uniform(double lo, double hi) { return {Uniform{lo, hi}}; }
  static RewardDistribution point(double value) { return {PointMass{value}}; }
  static RewardDistribution discrete(std::vector<double> values, std::vector<double> probs) {
    return {Discrete{std::move(values), std::move(probs)}};
  }

  const Kind& kind() const { return kind_; }

  std::string name() const {
    return std::visit(
        [](const auto& d) -> std::string {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, Exponential>) return "exponential";
          if constexpr (std::is_same_v<T, Uniform>) return "uniform";
          if constexpr (std::is_same_v<T, PointMass>) return "point";
          if constexpr (std::is_same_v<T, Discrete>) return "discrete";
        },
        kind_);
  }

  /// True for laws with a continuous CDF (exponential, non-degenerate uniform).
  bool continuous() const {
    if (std::holds_alternative<Exponential>(kind_)) return true;
    if (const auto* u = std::get_if<Uniform>(&kind_)) return u->hi > u->lo;
    return false;
  }

  double mean() const {
    return std::visit(
        [](const auto& d) -> double {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, Exponential>) return 1.0 / d.rate;
          if constexpr (std::is_same_v<T, Uniform>) return 0.5 * (d.lo + d.hi);
          if constexpr (std::is_same_v<T, PointMass>) return d.value;
          if constexpr (std::is_same_v<T, Discrete>) {
            return std::inner_product(d.values.begin(), d.values.end(), d.probs.begin(), 0.0);
          }
        },
        kind_);
  }

  double second_moment() const {
    return std::visit(
        [](const auto& d) -> double {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, Exponential>) return 2.0 / (d.rate * d.rate);
          if constexpr (std::is_same_v<T, Uniform>) {
            return (d.lo * d.lo + d.lo * d.hi + d.hi * d.hi) / 3.0;
          }
          if constexpr (std::is_same_v<T, PointMass>) return d.value * d.value;
          if constexpr (std::is_same_v<T, Discrete>) {
            double s = 0.0;
            for (std::size_t i = 0; i < d.values.size(); ++i) s += d.probs[i] * d.values[i] * d.values[i];
            return s;
          }
        },
        kind_);
  }

  /// P(W <= x).
  double cdf(double x) const {
    return std::visit(
        [x](const auto& d) -> double {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, Exponential>) return x <= 0.0 ? 0.0 : -std::expm1(-d.rate * x);
          if constexpr (std::is_same_v<T, Uniform>) {
            if (x < d.lo) return 0.0;
            if (x >= d.hi) return 1.0;
            return (x - d.lo) / (d.hi - d.lo);
          }
          if constexpr (std::is_same_v<T, PointMass>) return x >= d.value ? 1.0 : 0.0;
          if constexpr (std::is_same_v<T, Discrete>) {
            double c = 0.0;
            for (std::size_t i = 0; i < d.values.size() && d.values[i] <= x; ++i) c += d.probs[i];
            return std::min(c, 1.0);
          }
        },
        kind_);
  }

  /// Generalized inverse: inf{x : F(x) >= u}, for u in [0, 1].
  double quantile(double u) const {
    u = std::clamp(u, 0.0, 1.0);
    return std::visit(
        [u](const auto& d) -> double {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, Exponential>) {
            if (u >= 1.0) return std::numeric_limits<double>::infinity();
            return -std::log1p(-u) / d.rate;
          }
          if constexpr (std::is_same_v<T, Uniform>) return d.lo + u * (d.hi - d.lo);
          if constexpr (std::is_same_v<T, PointMass>) return d.value;
          if constexpr (std::is_same_v<T, Discrete>) {
            double c = 0.0;
            for (std::size_t i = 0; i < d.values.size(); ++i) {
              c += d.probs[i];
              if (c >= u) return d.values[i];
            }
            return d.values.back();
          }
        },
        kind_);
  }

  /// Mean of the upper p-fraction of the law, E[W | W >= quantile(1-p)] for
  /// continuous laws. Atoms straddling the cut are split so that exactly mass
  /// p is averaged. tail_mean(1) equals mean(); tail_mean(0) is the essential
  /// supremum.
  double tail_mean(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("tail_mean: p must lie in [0,1]");
    return std::visit(
        [p, this](const auto& d) -> double {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, Exponential>) {
            if (p == 0.0) return std::numeric_limits<double>::infinity();
            return -std::log(p) / d.rate + 1.0 / d.rate;
          }
          if constexpr (std::is_same_v<T, Uniform>) {
            const double tau = d.hi - p * (d.hi - d.lo);
            return 0.5 * (tau + d.hi);
          }
          if constexpr (std::is_same_v<T, PointMass>) return d.value;
          if constexpr (std::is_same_v<T, Discrete>) {
            if (p == 0.0) return d.values.back();
            if (p == 1.0) return mean();
            double need = p;
            double acc = 0.0;
            for (std::size_t i = d.values.size(); i-- > 0;) {
              const double take = std::min(need, d.probs[i]);
              acc += take * d.values[i];
              need -= take;
              if (need <= 0.0) break;
            }
            return acc / p;
          }
        },
        kind_);
  }

  /// E[W^2 ; W > c].
  double upper_second_moment(double c) const {
    return std::visit(
        [c](const auto& d) -> double {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, Exponential>) {
            const double x = std::max(c, 0.0);
            const double r = d.rate;
            return std::exp(-r * x) * (x * x + 2.0 * x / r + 2.0 / (r * r));
          }
          if constexpr (std::is_same_v<T, Uniform>) {
            if (c >= d.hi) return 0.0;
            if (d.hi == d.lo) return c < d.lo ? d.lo * d.lo : 0.0;
            const double m = std::max(c, d.lo);
            return (d.hi * d.hi * d.hi - m * m * m) / (3.0 * (d.hi - d.lo));
          }
          if constexpr (std::is_same_v<T, PointMass>) return d.value > c ? d.value * d.value : 0.0;
          if constexpr (std::is_same_v<T, Discrete>) {
            double s = 0.0;
            for (std::size_t i = 0; i < d.values.size(); ++i) {
              if (d.values[i] > c) s += d.probs[i] * d.values[i] * d.values[i];
            }
            return s;
          }
        },
        kind_);
  }

  /// Inversion sampling so draws are reproducible across standard libraries.
  double sample(Rng& rng) const {
    if (const auto* pm = std::get_if<PointMass>(&kind_)) return pm->value;
    return quantile(rng.uniform());
  }

 private:
  void validate() {
    std::visit(
        [](auto& d) {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, Exponential>) {
            if (!(d.rate > 0.0) || !std::isfinite(d.rate)) {
              throw std::invalid_argument("exponential rate must be positive and finite");
            }
          }
          if constexpr (std::is_same_v<T, Uniform>) {
            if (!(d.lo >= 0.0) || !(d.hi >= d.lo) || !std::isfinite(d.hi)) {
              throw std::invalid_argument("uniform bounds must satisfy 0 <= lo <= hi < inf");
            }
          }
          if constexpr (std::is_same_v<T, PointMass>) {
            if (!(d.value >= 0.0) || !std::isfinite(d.value)) {
              throw std::invalid_argument("point mass must be non-negative and finite");
            }
          }
          if constexpr (std::is_same_v<T, Discrete>) {
            if (d.values.empty() || d.values.size() != d.probs.size()) {
              throw std::invalid_argument("discrete law needs matching non-empty values/probs");
            }
            double total = 0.0;
            for (std::size_t i = 0; i < d.values.size(); ++i) {
              if (!(d.values[i] >= 0.0) || !std::isfinite(d.values[i])) {
                throw std::invalid_argument("discrete values must be non-negative and finite");
              }
              if (!(d.probs[i] >= 0.0)) throw std::invalid_argument("discrete probabilities must be >= 0");
              total += d.probs[i];
            }
            if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("discrete probabilities must sum to 1");
            std::vector<std::size_t> order(d.values.size());
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t i, std::size_t j) { return d.values[i] < d.values[j]; });
            std::vector<double> v;
            std::vector<double> p;
            for (auto i : order) {
              if (!v.empty() && v.back() == d.values[i]) {
                p.back() += d.probs[i] / total;
              } else {
                v.push_back(d.values[i]);
                p.push_back(d.probs[i] / total);
              }
            }
            d.values = std::move(v);
            d.probs = std::move(p);
          }
        },
        kind_);
  }

  Kind kind_;
};

}  // namespace rsg
