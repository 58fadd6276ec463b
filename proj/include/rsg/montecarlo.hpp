#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <thread>
#include <vector>

#include "rsg/rng.hpp"

namespace rsg {

/// Monte Carlo settings shared by every estimator.
struct McConfig {
  std::size_t samples = 100000;
  RngSpec rng{};
  unsigned threads = 1;
};

/// Samples are processed in fixed-size blocks, each with its own engines
/// derived from (spec, lane, block index). Partial results are merged in block
/// order, so the final numbers do not depend on the thread count.
inline constexpr std::size_t kMcBlockSize = 4096;

/// `body(acc, begin, end, block)` fills a fresh accumulator for one block;
/// `Acc::merge(const Acc&)` folds blocks together.
template <class Acc, class Body>
Acc run_blocks(std::size_t samples, unsigned threads, const Acc& zero, Body body) {
  const std::size_t blocks = (samples + kMcBlockSize - 1) / kMcBlockSize;
  std::vector<Acc> partial(blocks, zero);
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t b = first; b < blocks; b += stride) {
      const std::size_t begin = b * kMcBlockSize;
      const std::size_t end = std::min(samples, begin + kMcBlockSize);
      body(partial[b], begin, end, static_cast<std::uint64_t>(b));
    }
  };
  const unsigned t = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(blocks)));
  if (t <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (unsigned i = 0; i < t; ++i) pool.emplace_back(work, i, t);
    for (auto& th : pool) th.join();
  }
  Acc total = zero;
  for (const auto& p : partial) total.merge(p);
  return total;
}

/// Running sum and sum of squares of a scalar.
struct ScalarMoments {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++count;
  }
  void merge(const ScalarMoments& o) {
    sum += o.sum;
    sum_sq += o.sum_sq;
    count += o.count;
  }
  double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
  /// Standard error of the mean (unbiased variance).
  double stderr_of_mean() const {
    if (count < 2) return 0.0;
    const double n = static_cast<double>(count);
    const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
    return std::sqrt(var / n);
  }
};

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
};

}  // namespace rsg
