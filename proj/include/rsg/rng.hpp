#pragma once

#include <cstdint>
#include <random>

namespace rsg {

/// Seed plus stream id. Identical specs always produce identical sequences.
struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  friend bool operator==(const RngSpec&, const RngSpec&) = default;
};

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ splitmix64(b + 0x632BE59BD9B4E019ULL));
}

}  // namespace detail

/// Independent lanes within one stream. World draws, Omega draws and each
/// player's private randomization never share an engine, so estimates that
/// use the same RngSpec see common random numbers lane by lane.
enum class Lane : std::uint64_t {
  world = 1,
  omega = 2,
  action_a = 3,
  action_b = 4,
  mixture = 5,
  misc = 6,
};

class Rng {
 public:
  Rng(RngSpec spec, Lane lane, std::uint64_t block = 0)
      : engine_(seed_for(spec, lane, block)) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n) {
    auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

  std::uint64_t bits() { return engine_(); }

 private:
  static std::uint64_t seed_for(RngSpec spec, Lane lane, std::uint64_t block) {
    std::uint64_t s = detail::mix(spec.seed, spec.stream);
    s = detail::mix(s, static_cast<std::uint64_t>(lane));
    return detail::mix(s, block);
  }

  std::mt19937_64 engine_;
};

/// Derive a child spec, e.g. one per repetition or per solver iteration.
inline RngSpec substream(RngSpec parent, std::uint64_t child) {
  return {parent.seed, detail::mix(parent.stream, child + 1)};
}

}  // namespace rsg
