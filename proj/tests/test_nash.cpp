#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rsg/nash.hpp"

using namespace rsg;

namespace {

using D = RewardDistribution;

GameInstance hidden(std::vector<double> means) {
  std::vector<D> ds;
  for (double m : means) ds.push_back(D::exponential_mean(m));
  return GameInstance({0, 0, means.size(), 0}, ds);
}

StrategyStats simplex_stats(Player pl, std::vector<double> p, const GameInstance& g) {
  return estimate_stats(make_simplex(std::move(p)), g, pl, 1, {});
}

std::vector<double> random_simplex(std::mt19937_64& gen, std::size_t n) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(n);
  double s = 0.0;
  for (auto& v : p) s += v = e(gen);
  for (auto& v : p) v /= s;
  return p;
}

}  // namespace

TEST(BestResponse, HiddenExample) {
  const auto g = hidden({1.0, 1.0});
  const auto br = best_response(Player::A, simplex_stats(Player::B, {1, 0}, g), g);
  EXPECT_EQ(br.weights, (std::vector<double>{0.5, 1.0}));
  Rng r({}, Lane::action_a);
  EXPECT_EQ(choose(br, std::vector<double>(2, 0.0), r), 1u);
}

TEST(BestResponse, OpponentPrivateExample) {
  const GameInstance g({0, 1, 1, 0}, {D::exponential(1.0), D::exponential(1.0)});
  const auto opp = make_stats(Player::B, {0.5, 0.5}, {0.6});
  const auto br = best_response(Player::A, opp, g);
  EXPECT_NEAR(br.weights[0], 0.7, 1e-15);
  EXPECT_NEAR(br.weights[1], 0.75, 1e-15);
  Rng r({}, Lane::action_a);
  EXPECT_EQ(choose(br, std::vector<double>(2, 0.0), r), 1u);
}

TEST(BestResponse, OwnPrivateCoefficient) {
  const GameInstance g({1, 0, 1, 0}, {D::exponential(1.0), D::exponential(1.0)});
  const auto br = best_response(Player::A, make_stats(Player::B, {1.0, 0.0}, {}), g);
  EXPECT_DOUBLE_EQ(br.weights[0], 0.5);
  EXPECT_EQ(br.observed.count, 1u);
  EXPECT_THROW(best_response(Player::A, make_stats(Player::A, {1.0, 0.0}, {0.0}), g), std::invalid_argument);
}

TEST(BestResponse, IsOptimalAgainstRandomSimplexOpponents) {
  // Oracle: enumerate pure strategies in an all-hidden game.
  std::mt19937_64 gen(3);
  const auto g = hidden({1.7, 1.0, 0.4, 2.2});
  for (int trial = 0; trial < 50; ++trial) {
    const auto ob = simplex_stats(Player::B, random_simplex(gen, 4), g);
    const auto br = estimate_stats(best_response(Player::A, ob, g), g, Player::A, 1, {});
    const double u = expected_utility(br, ob, g, Player::A);
    for (std::size_t k = 0; k < 4; ++k) {
      std::vector<double> e(4, 0.0);
      e[k] = 1.0;
      EXPECT_GE(u + 1e-12, expected_utility(simplex_stats(Player::A, e, g), ob, g, Player::A));
    }
  }
}

TEST(Potential, UniformHidden) {
  const auto g = hidden({1.0, 1.0});
  EXPECT_DOUBLE_EQ(potential(simplex_stats(Player::A, {0.5, 0.5}, g), simplex_stats(Player::B, {0.5, 0.5}, g), g), 1.75);
}

TEST(Potential, UnilateralChangeEqualsUtilityChange) {
  std::mt19937_64 gen(17);
  const GameInstance g({1, 1, 1, 1}, {D::exponential(1.0), D::exponential(0.5), D::uniform(0, 3), D::point(1.0)}, {0.8});
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    auto a1 = random_simplex(gen, 4), a2 = random_simplex(gen, 4), b = random_simplex(gen, 4);
    const auto sa1 = make_stats(Player::A, a1, {u(gen) * a1[0] * g.expected(0) * 2});
    const auto sa2 = make_stats(Player::A, a2, {u(gen) * a2[0] * g.expected(0) * 2});
    const auto sb = make_stats(Player::B, b, {u(gen) * b[1] * g.expected(1) * 2});
    const double dh = potential(sa2, sb, g) - potential(sa1, sb, g);
    const double du = expected_utility(sa2, sb, g, Player::A) - expected_utility(sa1, sb, g, Player::A);
    EXPECT_NEAR(dh, du, 1e-12);
    // Same for a B deviation.
    const auto sb2 = make_stats(Player::B, a1, {u(gen) * a1[1] * g.expected(1) * 2});
    EXPECT_NEAR(potential(sa1, sb2, g) - potential(sa1, sb, g),
                expected_utility(sb2, sa1, g, Player::B) - expected_utility(sb, sa1, g, Player::B), 1e-12);
  }
}

TEST(IterateBestResponse, DominantFirstResource) {
  const auto g = hidden({3.0, 1.0, 1.0});
  const auto rep = iterate_best_response(g, 1e-3);
  EXPECT_TRUE(rep.converged);
  EXPECT_TRUE(rep.exact);
  EXPECT_EQ(rep.stats_a.p, (std::vector<double>{1, 0, 0}));
  EXPECT_EQ(rep.stats_b.p, (std::vector<double>{1, 0, 0}));
  EXPECT_DOUBLE_EQ(expected_utility(rep.stats_a, rep.stats_b, g, Player::A), 1.5);
  EXPECT_DOUBLE_EQ(expected_utility(rep.stats_b, rep.stats_a, g, Player::B), 1.5);
  EXPECT_EQ(rep.trace.size(), rep.iterations);
}

TEST(IterateBestResponse, ExactTraceIncrementsMatchImprovements) {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> u(0.2, 4.0);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = hidden({u(gen), u(gen), u(gen), u(gen)});
    const auto rep = iterate_best_response(g, 1e-3);
    double prev = rep.initial_potential;
    for (const auto& s : rep.trace) {
      EXPECT_GE(s.potential, prev - 1e-12);
      EXPECT_NEAR(s.potential - prev, s.adopted ? s.improvement : 0.0, 1e-9);
      prev = s.potential;
    }
    EXPECT_LE(rep.iterations, best_response_iteration_budget(g, 1e-3));
    EXPECT_TRUE(rep.converged);
    // At exit neither player gains more than epsilon by best-responding.
    for (Player pl : {Player::A, Player::B}) {
      const auto& self = pl == Player::A ? rep.stats_a : rep.stats_b;
      const auto& opp = pl == Player::A ? rep.stats_b : rep.stats_a;
      const auto br = estimate_stats(best_response(pl, opp, g), g, pl, 1, {});
      EXPECT_LE(expected_utility(br, opp, g, pl) - expected_utility(self, opp, g, pl), 1e-3);
    }
  }
}

TEST(IterateBestResponse, NoisyStatsStayWithinBudget) {
  const GameInstance g({1, 1, 1, 0}, {D::exponential_mean(1.5), D::exponential(1.0), D::exponential(1.0)});
  McConfig mc;
  mc.samples = 20000;
  mc.rng = {99, 0};
  const auto rep = iterate_best_response(g, 1e-2, mc);
  EXPECT_FALSE(rep.exact);
  EXPECT_LE(rep.iterations, best_response_iteration_budget(g, 1e-2));
  for (const auto& s : rep.trace) EXPECT_LE(s.potential, 2.0 * g.total_expected() + 1e-9);
}

TEST(IterateBestResponse, RejectsNonPositiveEpsilon) {
  EXPECT_THROW(iterate_best_response(hidden({1.0}), 0.0), std::invalid_argument);
}
