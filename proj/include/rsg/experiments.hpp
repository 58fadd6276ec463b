#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsg/distribution.hpp"
#include "rsg/dpp.hpp"
#include "rsg/explicit_solver.hpp"
#include "rsg/game.hpp"
#include "rsg/mirror_descent.hpp"
#include "rsg/montecarlo.hpp"
#include "rsg/nash.hpp"
#include "rsg/quantile_a1.hpp"
#include "rsg/rng.hpp"
#include "rsg/strategy.hpp"
#include "rsg/worst_case.hpp"

// Sweeps over the mean of resource 1 on three exponential-reward presets,
// with resources 2 and 3 at mean 1:
//   scenario 1: all hidden    (a, b, c, d) = (0, 0, 3, 0)
//   scenario 2: B observes 1  (0, 1, 2, 0)
//   scenario 3: A observes 1, B observes 2  (1, 1, 1, 0)

namespace rsg::experiments {

enum class Solver { nash, worst_explicit, worst_dpp, worst_md, worst_a1 };

inline const char* to_string(Solver s) {
  switch (s) {
    case Solver::nash: return "nash";
    case Solver::worst_explicit: return "worst-explicit";
    case Solver::worst_dpp: return "worst-dpp";
    case Solver::worst_md: return "worst-md";
    case Solver::worst_a1: return "worst-a1";
  }
  return "?";
}

inline Partition scenario_partition(int scenario) {
  switch (scenario) {
    case 1: return {0, 0, 3, 0};
    case 2: return {0, 1, 2, 0};
    case 3: return {1, 1, 1, 0};
    default: throw std::invalid_argument("scenario must be 1, 2 or 3");
  }
}

/// Exponential rewards with means (e1, 1, 1) on the scenario's partition.
inline GameInstance scenario_game(int scenario, double e1) {
  if (!(e1 > 0.0) || !std::isfinite(e1)) throw std::invalid_argument("E1 must be positive");
  return GameInstance(scenario_partition(scenario), {RewardDistribution::exponential_mean(e1), RewardDistribution::exponential_mean(1.0),
                                                     RewardDistribution::exponential_mean(1.0)});
}

struct ScenarioSpec {
  int scenario = 1;
  double e1_min = 0.5;
  double e1_max = 3.0;
  double e1_step = 0.25;
  Solver solver = Solver::nash;
  double epsilon = 1e-3;
  dpp::Config dpp;
  md::Config md;
  a1::P5Config p5;
  /// Samples behind every Monte Carlo estimate (stats, worst-case value, payoffs).
  std::size_t samples = 100000;
  unsigned threads = 1;
  std::uint64_t seed = 0;
  std::size_t repetitions = 1;

  std::vector<double> sweep_points() const {
    if (!(e1_step > 0.0)) throw std::invalid_argument("e1 step must be positive");
    if (!(e1_min > 0.0)) throw std::invalid_argument("e1 range must be positive");
    if (!(e1_max >= e1_min)) throw std::invalid_argument("e1 range is empty");
    std::vector<double> pts;
    const auto count = static_cast<std::size_t>(std::floor((e1_max - e1_min) / e1_step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) pts.push_back(e1_min + static_cast<double>(i) * e1_step);
    return pts;
  }

  void validate() const {
    const auto part = scenario_partition(scenario);
    (void)sweep_points();
    if (repetitions < 1) throw std::invalid_argument("repetitions must be at least 1");
    if (samples < 2) throw std::invalid_argument("samples must be at least 2");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    switch (solver) {
      case Solver::worst_explicit:
        if (part.a != 0 || part.b != 0) {
          throw std::invalid_argument("worst-explicit requires a scenario where no player observes anything");
        }
        break;
      case Solver::worst_md:
        if (part.a != 0) throw std::invalid_argument("worst-md requires a = 0");
        md.validate();
        break;
      case Solver::worst_a1:
        if (part.a != 1) throw std::invalid_argument("worst-a1 requires a = 1");
        p5.validate();
        break;
      case Solver::worst_dpp: dpp.validate(); break;
      case Solver::nash: break;
    }
  }
};

struct SweepTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::out_of_range("no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  }

  /// True when column `name` never decreases by more than `tol` down the rows.
  bool non_decreasing(const std::string& name, double tol = 0.0) const {
    const auto c = column(name);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i][c] < rows[i - 1][c] - tol) return false;
    }
    return true;
  }
};

/// Constant width, probabilities in [0, 1], each probability group summing to 1 within 1e-3.
inline void check_table(const SweepTable& t) {
  for (const auto& r : t.rows) {
    if (r.size() != t.header.size()) throw std::logic_error("sweep row width differs from header");
  }
  for (const std::string prefix : {"pA", "pB", "p"}) {
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < t.header.size(); ++c) {
      const auto& h = t.header[c];
      if (h.size() == prefix.size() + 1 && h.compare(0, prefix.size(), prefix) == 0 && std::isdigit(h.back())) {
        cols.push_back(c);
      }
    }
    if (cols.empty()) continue;
    for (const auto& r : t.rows) {
      double s = 0.0;
      for (auto c : cols) {
        if (r[c] < -1e-12 || r[c] > 1.0 + 1e-12) throw std::logic_error("probability outside [0,1] in sweep table");
        s += r[c];
      }
      if (std::abs(s - 1.0) > 1e-3) throw std::logic_error("probabilities do not sum to 1 in sweep table");
    }
  }
}

inline void write_csv(std::ostream& os, const SweepTable& t) {
  for (std::size_t c = 0; c < t.header.size(); ++c) os << (c ? "," : "") << t.header[c];
  os << '\n';
  char buf[40];
  for (const auto& r : t.rows) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.9g", r[c]);
      os << (c ? "," : "") << buf;
    }
    os << '\n';
  }
}

/// Outcome of one worst-case solve: A's choice probabilities and the value
/// against the worst-case opponent.
struct WorstCaseRun {
  std::vector<double> p;
  double value = 0.0;
  double std_error = 0.0;
};

inline WorstCaseRun solve_worst_case(const GameInstance& game, Solver solver, const ScenarioSpec& spec,
                                     std::uint64_t seed) {
  McConfig mc;
  mc.samples = spec.samples;
  mc.threads = spec.threads;
  mc.rng = RngSpec{seed, 0};
  auto eval = [&](const Strategy& s) {
    const auto w = worst_case_utility(s, game, mc);
    return WorstCaseRun{w.stats.p, w.value, w.std_error};
  };
  switch (solver) {
    case Solver::worst_explicit: return eval(make_simplex(explicit_solution(game.expected()).p));
    case Solver::worst_md: {
      auto cfg = spec.md;
      cfg.seed = seed;
      return eval(make_simplex(md::run_md(game, cfg).p));
    }
    case Solver::worst_dpp: {
      auto cfg = spec.dpp;
      cfg.seed = seed;
      return eval(dpp::run(game, cfg).mixture);
    }
    case Solver::worst_a1: {
      auto cfg = spec.p5;
      cfg.seed = seed;
      cfg.eval_samples = spec.samples;
      const auto r = a1::solve_p5(game, cfg);
      return {r.p, r.value, r.std_error};
    }
    case Solver::nash: break;
  }
  throw std::invalid_argument("not a worst-case solver");
}

/// One row per sweep point, in sweep order. Repetitions use derived seeds and
/// are averaged. For worst-case solvers `stderr` is the spread of the mean
/// over repetitions when there are several, otherwise the evaluation error,
/// and the band columns hold the min and max value over repetitions.
inline SweepTable run_scenario(const ScenarioSpec& spec) {
  spec.validate();
  const auto points = spec.sweep_points();
  const std::size_t n = 3;
  SweepTable t;
  const bool nash = spec.solver == Solver::nash;
  if (nash) {
    t.header = {"E1", "utility_A", "utility_B", "H"};
    for (std::size_t k = 1; k <= n; ++k) t.header.push_back("pA" + std::to_string(k));
    for (std::size_t k = 1; k <= n; ++k) t.header.push_back("pB" + std::to_string(k));
  } else {
    t.header = {"E1", "worst_value", "stderr"};
    for (std::size_t k = 1; k <= n; ++k) t.header.push_back("p" + std::to_string(k));
    t.header.push_back("band_min_over_reps");
    t.header.push_back("band_max_over_reps");
  }

  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto game = scenario_game(spec.scenario, points[i]);
    std::vector<double> row(t.header.size(), 0.0);
    row[0] = points[i];
    const double reps = static_cast<double>(spec.repetitions);
    double lo = HUGE_VAL, hi = -HUGE_VAL, sum_sq = 0.0, err_sq = 0.0;
    for (std::size_t r = 0; r < spec.repetitions; ++r) {
      const RngSpec rs = substream(substream(RngSpec{spec.seed, 0}, i), r);
      const std::uint64_t seed = detail::mix(rs.seed, rs.stream);
      if (nash) {
        McConfig mc;
        mc.samples = spec.samples;
        mc.threads = spec.threads;
        mc.rng = RngSpec{seed, 0};
        const auto rep = iterate_best_response(game, spec.epsilon, mc);
        row[1] += expected_utility(rep.stats_a, rep.stats_b, game, Player::A) / reps;
        row[2] += expected_utility(rep.stats_b, rep.stats_a, game, Player::B) / reps;
        row[3] += potential(rep.stats_a, rep.stats_b, game) / reps;
        for (std::size_t k = 0; k < n; ++k) {
          row[4 + k] += rep.stats_a.p[k] / reps;
          row[4 + n + k] += rep.stats_b.p[k] / reps;
        }
      } else {
        const auto w = solve_worst_case(game, spec.solver, spec, seed);
        row[1] += w.value / reps;
        sum_sq += w.value * w.value;
        err_sq += w.std_error * w.std_error;
        lo = std::min(lo, w.value);
        hi = std::max(hi, w.value);
        for (std::size_t k = 0; k < n; ++k) row[3 + k] += w.p[k] / reps;
      }
    }
    if (!nash) {
      if (spec.repetitions > 1) {
        const double var = std::max(0.0, (sum_sq - reps * row[1] * row[1]) / (reps - 1.0));
        row[2] = std::sqrt(var / reps);
      } else {
        row[2] = std::sqrt(err_sq);
      }
      row[3 + n] = lo;
      row[4 + n] = hi;
    }
    t.rows.push_back(std::move(row));
  }
  check_table(t);
  return t;
}

}  // namespace rsg::experiments
