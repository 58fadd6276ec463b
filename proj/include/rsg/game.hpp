#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsg/distribution.hpp"
#include "rsg/rng.hpp"

namespace rsg {

enum class Player { A, B };

inline Player opponent(Player p) { return p == Player::A ? Player::B : Player::A; }
inline const char* to_string(Player p) { return p == Player::A ? "A" : "B"; }

/// Who observes the realization of a resource's reward.
enum class InfoClass {
  private_a,  ///< seen by A only
  private_b,  ///< seen by B only
  hidden,     ///< seen by neither
  shared,     ///< seen by both (conditioned on)
};

/// Contiguous index range [begin, begin + count).
struct IndexRange {
  std::size_t begin = 0;
  std::size_t count = 0;

  std::size_t end() const { return begin + count; }
  bool contains(std::size_t k) const { return k >= begin && k < end(); }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

/// Split of n resources into the four information classes, laid out in the
/// canonical order A-private, B-private, hidden, shared. Indices are 0-based.
struct Partition {
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t c = 0;
  std::size_t d = 0;

  std::size_t n() const { return a + b + c + d; }

  IndexRange private_a() const { return {0, a}; }
  IndexRange private_b() const { return {a, b}; }
  IndexRange hidden() const { return {a + b, c}; }
  IndexRange shared() const { return {a + b + c, d}; }
  IndexRange private_of(Player p) const { return p == Player::A ? private_a() : private_b(); }

  InfoClass class_of(std::size_t k) const {
    if (k < a) return InfoClass::private_a;
    if (k < a + b) return InfoClass::private_b;
    if (k < a + b + c) return InfoClass::hidden;
    if (k < n()) return InfoClass::shared;
    throw std::out_of_range("resource index " + std::to_string(k) + " outside partition of size " +
                            std::to_string(n()));
  }

  friend bool operator==(const Partition&, const Partition&) = default;
};

/// One game, conditioned on the realized shared rewards z. Immutable after
/// construction.
class GameInstance {
 public:
  GameInstance(Partition partition, std::vector<RewardDistribution> distributions, std::vector<double> z = {})
      : partition_(partition), distributions_(std::move(distributions)), z_(std::move(z)) {
    if (partition_.n() == 0) throw std::invalid_argument("game needs at least one resource");
    if (distributions_.size() != partition_.n()) {
      throw std::invalid_argument("expected " + std::to_string(partition_.n()) + " distributions, got " +
                                  std::to_string(distributions_.size()));
    }
    if (z_.size() != partition_.d) {
      throw std::invalid_argument("expected " + std::to_string(partition_.d) + " shared realizations, got " +
                                  std::to_string(z_.size()));
    }
    for (double v : z_) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("shared realizations must be >= 0");
    }
    means_.resize(partition_.n());
    for (std::size_t k = 0; k < partition_.n(); ++k) {
      means_[k] = partition_.shared().contains(k) ? z_[k - partition_.shared().begin] : distributions_[k].mean();
    }
  }

  const Partition& partition() const { return partition_; }
  std::size_t n() const { return partition_.n(); }
  const std::vector<RewardDistribution>& distributions() const { return distributions_; }
  const RewardDistribution& distribution(std::size_t k) const { return distributions_.at(k); }
  const std::vector<double>& z() const { return z_; }

  /// Conditional means: z_k on shared resources, the law's mean elsewhere.
  const std::vector<double>& expected() const { return means_; }
  double expected(std::size_t k) const { return means_.at(k); }

  double total_expected() const {
    double s = 0.0;
    for (double e : means_) s += e;
    return s;
  }

 private:
  Partition partition_;
  std::vector<RewardDistribution> distributions_;
  std::vector<double> z_;
  std::vector<double> means_;
};

inline const std::vector<double>& expected_rewards(const GameInstance& game) { return game.expected(); }

/// Draw every unobserved-by-both reward; shared entries stay at z.
inline void sample_world(const GameInstance& game, Rng& rng, std::span<double> out) {
  const auto shared = game.partition().shared();
  for (std::size_t k = 0; k < game.n(); ++k) {
    out[k] = shared.contains(k) ? game.z()[k - shared.begin] : game.distribution(k).sample(rng);
  }
}

inline std::vector<double> sample_world(const GameInstance& game, Rng& rng) {
  std::vector<double> w(game.n());
  sample_world(game, rng, w);
  return w;
}

/// Omega_k = 1 on A-private, a fresh W_k draw on B-private, E_k elsewhere.
inline void sample_omega(const GameInstance& game, Rng& rng, std::span<double> out) {
  const auto& part = game.partition();
  for (std::size_t k = 0; k < game.n(); ++k) {
    switch (part.class_of(k)) {
      case InfoClass::private_a: out[k] = 1.0; break;
      case InfoClass::private_b: out[k] = game.distribution(k).sample(rng); break;
      default: out[k] = game.expected(k); break;
    }
  }
}

inline std::vector<double> sample_omega(const GameInstance& game, Rng& rng) {
  std::vector<double> w(game.n());
  sample_omega(game, rng, w);
  return w;
}

/// Omega when B observes nothing: deterministic.
inline std::vector<double> deterministic_omega(const GameInstance& game) {
  if (game.partition().b != 0) throw std::logic_error("Omega is random when B has private resources");
  std::vector<double> w(game.n());
  for (std::size_t k = 0; k < game.n(); ++k) w[k] = game.partition().private_a().contains(k) ? 1.0 : game.expected(k);
  return w;
}

}  // namespace rsg
