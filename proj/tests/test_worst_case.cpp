#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "rsg/explicit_solver.hpp"
#include "rsg/utility.hpp"
#include "rsg/worst_case.hpp"

using namespace rsg;

namespace {

using D = RewardDistribution;

GameInstance hidden(std::vector<double> means) {
  std::vector<D> ds;
  for (double m : means) ds.push_back(D::exponential_mean(m));
  return GameInstance({0, 0, means.size(), 0}, ds);
}

}  // namespace

TEST(WorstCaseResponse, Examples) {
  Rng r({}, Lane::action_b);
  const auto g = hidden({1.0, 1.0});
  const auto br = worst_case_response(make_stats(Player::A, {1, 0}, {}), g);
  EXPECT_EQ(br.weights, (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(choose(br, std::vector<double>(2, 0.0), r), 0u);

  const GameInstance g2({1, 0, 1, 0}, {D::exponential(1.0), D::exponential(1.0)});
  const auto br2 = worst_case_response(make_stats(Player::A, {0.1, 0.9}, {0.2}), g2);
  EXPECT_EQ(br2.weights, (std::vector<double>{0.2, 0.9}));
  EXPECT_EQ(choose(br2, std::vector<double>(2, 0.0), r), 1u);

  const auto br3 = worst_case_response(make_stats(Player::A, {0.5, 0.5}, {}), g);
  EXPECT_EQ(choose(br3, std::vector<double>(2, 0.0), r), 0u);
  EXPECT_THROW(worst_case_response(make_stats(Player::B, {1, 0}, {}), g), std::invalid_argument);
}

TEST(WorstCaseResponse, MinimizesUtilityOverPureOpponents) {
  // Against a blind A, B's pure strategies are an exhaustive oracle.
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = hidden({u(gen), u(gen), u(gen)});
    std::vector<double> p{u(gen), u(gen), u(gen)};
    const double s = p[0] + p[1] + p[2];
    for (auto& v : p) v /= s;
    const auto sa = estimate_stats(make_simplex(p), g, Player::A, 1, {});
    const auto sb = estimate_stats(worst_case_response(sa, g), g, Player::B, 1, {});
    const double worst = expected_utility(sa, sb, g, Player::A);
    for (std::size_t k = 0; k < 3; ++k) {
      std::vector<double> e(3, 0.0);
      e[k] = 1.0;
      const auto pure = estimate_stats(make_simplex(e), g, Player::B, 1, {});
      EXPECT_LE(worst, expected_utility(sa, pure, g, Player::A) + 1e-12);
    }
    EXPECT_NEAR(worst, worst_case_utility(make_simplex(p), g).value, 1e-12);
  }
}

TEST(EvaluateF, Examples) {
  const auto g = hidden({2.0, 1.0});
  EXPECT_DOUBLE_EQ(evaluate_f(std::vector<double>{1, 0}, g).value, 1.0);
  EXPECT_DOUBLE_EQ(evaluate_f(std::vector<double>{0, 0}, g).value, 0.0);
  const auto g3 = hidden({1.0, 1.0, 1.0});
  EXPECT_NEAR(evaluate_f(std::vector<double>(3, 1.0 / 3), g3).value, 5.0 / 6, 1e-15);
  EXPECT_THROW(evaluate_f(std::vector<double>{-0.1, 1.1}, g), std::invalid_argument);
  EXPECT_THROW(evaluate_f(std::vector<double>{1.0}, g), std::invalid_argument);
}

TEST(EvaluateF, RandomOmegaMatchesClosedFormForOneCoordinate) {
  // B observes resource 1 (exponential rate 1), resource 2 hidden with mean 1.
  // E[max(W x1, x2)] = x2 + x1 exp(-x2/x1).
  const GameInstance g({0, 1, 1, 0}, {D::exponential(1.0), D::exponential(1.0)});
  McConfig mc;
  mc.samples = 400000;
  mc.rng = {12, 0};
  const std::vector<double> x{0.6, 0.4};
  const auto f = evaluate_f(x, g, mc);
  const double exact = 1.0 - 0.5 * (x[1] + x[0] * std::exp(-x[1] / x[0]));
  EXPECT_GT(f.std_error, 0.0);
  EXPECT_NEAR(f.value, exact, 4.0 * f.std_error);
  EXPECT_NEAR(f.value, 1.0 - 0.5 * f.max_mean, 1e-12);
}

TEST(WorstCaseUtility, Examples) {
  const auto g = hidden({1.0, 1.0});
  EXPECT_DOUBLE_EQ(worst_case_utility(make_simplex({1, 0}), g).value, 0.5);
  EXPECT_DOUBLE_EQ(worst_case_utility(make_simplex({0.5, 0.5}), g).value, 0.75);
  EXPECT_DOUBLE_EQ(worst_case_utility(make_simplex({1, 0, 0}), hidden({2.0, 1.0, 1.0})).value, 1.0);
}

TEST(WorstCaseUtility, MatchesObjectiveP2) {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = hidden({u(gen), u(gen), u(gen), u(gen)});
    std::vector<double> p{u(gen), u(gen), u(gen), u(gen)};
    const double s = p[0] + p[1] + p[2] + p[3];
    for (auto& v : p) v /= s;
    const auto w = worst_case_utility(make_simplex(p), g);
    EXPECT_NEAR(w.value, objective_p2(p, g.expected()), 1e-12);
    double lin = 0.0;
    for (std::size_t k = 0; k < 4; ++k) lin += g.expected(k) * w.stats.p[k];
    EXPECT_NEAR(w.value, lin - 0.5 * w.lambda_max_mean, 1e-12);
  }
}

TEST(WorstCaseUtility, PrivateObservationsUseMonteCarlo) {
  const GameInstance g({1, 1, 1, 0}, {D::exponential(1.0), D::exponential(1.0), D::exponential(1.0)});
  McConfig mc;
  mc.samples = 50000;
  mc.rng = {3, 3};
  const auto w = worst_case_utility(make_score({1.0, 0.9, 0.0}, {0, 1}), g, mc);
  EXPECT_EQ(w.mc_samples, 50000u);
  EXPECT_GT(w.std_error, 0.0);
  const auto w2 = worst_case_utility(make_score({1.0, 0.9, 0.0}, {0, 1}), g, mc);
  EXPECT_EQ(w.value, w2.value);
  EXPECT_NEAR(std::accumulate(w.stats.p.begin(), w.stats.p.end(), 0.0), 1.0, 1e-6);
}
