#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "rsg/dpp.hpp"
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

TEST(FtSubgradient, Examples) {
  const GameInstance g({1, 0, 1, 0}, {D::exponential(1.0), D::exponential(1.0)});
  EXPECT_EQ(dpp::ft_subgradient(std::vector<double>{0.5, 0.5}, std::vector<double>{1, 1}, g),
            (std::vector<double>{0.5, 1.0}));
  const auto h3 = hidden({2.0, 1.0, 1.0});
  EXPECT_EQ(dpp::ft_subgradient(std::vector<double>(3, 0.0), h3.expected(), h3), (std::vector<double>{1.0, 1.0, 1.0}));
  const auto h = hidden({1.0, 1.0});
  EXPECT_EQ(dpp::ft_subgradient(std::vector<double>{0, 1}, std::vector<double>{1, 1}, h),
            (std::vector<double>{1.0, 0.5}));
  EXPECT_THROW(dpp::ft_subgradient(std::vector<double>{0}, std::vector<double>{1, 1}, h), std::invalid_argument);
}

TEST(GammaStep, Examples) {
  const auto h = hidden({1.0});
  EXPECT_DOUBLE_EQ(dpp::gamma_step(std::vector<double>{0.5}, std::vector<double>{1}, std::vector<double>{1}, 2.0, 2.0, h)[0], 0.75);
  EXPECT_DOUBLE_EQ(dpp::gamma_step(std::vector<double>{0.5}, std::vector<double>{1e9}, std::vector<double>{1}, 2.0, 2.0, h)[0], 0.0);
  EXPECT_DOUBLE_EQ(dpp::gamma_step(std::vector<double>{1}, std::vector<double>{0}, std::vector<double>{3}, 3.0, 3.0, h)[0], 1.0);
  const GameInstance g({1, 0, 0, 0}, {D::exponential_mean(2.5)});
  EXPECT_DOUBLE_EQ(dpp::gamma_step(std::vector<double>{2}, std::vector<double>{0}, std::vector<double>{10}, 10.0, 1.0, g)[0], 2.5);
}

TEST(QueueStep, Examples) {
  const GameInstance g({1, 0, 1, 0}, {D::exponential(1.0), D::exponential(1.0)});
  const std::vector<double> x{0.8, 0.0};
  EXPECT_NEAR(dpp::queue_step(std::vector<double>{0, 2}, std::vector<double>{0, 0.3}, 1, x, g)[1], 1.3, 1e-15);
  EXPECT_EQ(dpp::queue_step(std::vector<double>{0, 0}, std::vector<double>{0, 0}, 1, x, g)[1], 0.0);
  EXPECT_DOUBLE_EQ(dpp::queue_step(std::vector<double>{1, 0}, std::vector<double>{0.5, 0}, 1, x, g)[0], 1.5);
  EXPECT_NEAR(dpp::queue_step(std::vector<double>{1, 0}, std::vector<double>{0.5, 0}, 0, x, g)[0], 0.7, 1e-15);
  EXPECT_THROW(dpp::queue_step(std::vector<double>{1, 0}, std::vector<double>{0.5, 0}, 2, x, g), std::invalid_argument);
}

TEST(QueueBound, Examples) {
  const GameInstance g({1, 0, 1, 0}, {D::exponential(1.0), D::exponential(1.0)});
  const auto b = dpp::queue_bound(g, 4.0);
  EXPECT_NEAR(b[0], (1 + 2 * std::sqrt(2.0)) * 2 + 1, 1e-12);
  EXPECT_NEAR(b[0], 8.656854, 1e-6);
  EXPECT_NEAR(b[1], b[0], 1e-12);
  const GameInstance g2({1, 0, 1, 0}, {D::exponential_mean(3.0), D::exponential_mean(3.0)});
  const auto b2 = dpp::queue_bound(g2, 9.0);
  EXPECT_NEAR(b2[0], (1 + 2 * std::sqrt(2.0) * 3) * 3 + 3, 1e-12);
  EXPECT_NEAR(b2[1], (3 + 2 * std::sqrt(2.0)) * 3 + 1, 1e-12);
}

TEST(BoundConstants, Examples) {
  dpp::Config cfg;
  const auto c = dpp::bound_constants(hidden({1.0, 1.0}), cfg);
  EXPECT_DOUBLE_EQ(c.D1, 2.0);
  EXPECT_DOUBLE_EQ(c.D2, 10.0);
  EXPECT_DOUBLE_EQ(c.D3, 2.0);

  const GameInstance all_a({2, 0, 0, 0}, {D::exponential_mean(2.0), D::exponential_mean(3.0)});
  const auto ca = dpp::bound_constants(all_a, cfg);
  EXPECT_DOUBLE_EQ(ca.D3, 13.0);
  EXPECT_DOUBLE_EQ(ca.D1, 0.5 * (13.0 + 8.0 + 18.0));
  EXPECT_DOUBLE_EQ(ca.D2, 8.0 + 2.0);

  // b = 0: D2 = 4a + sum of E^2 off A + 4 sum of E^2 off A.
  const GameInstance mixed({1, 0, 1, 1}, {D::exponential(1.0), D::exponential_mean(2.0), D::point(1.0)}, {3.0});
  const auto cm = dpp::bound_constants(mixed, cfg);
  EXPECT_DOUBLE_EQ(cm.D2, 4.0 + 1.0 + 4.0 + 9.0 + 4.0 * (4.0 + 9.0));

  // B-private resources enter E||Omega||^2 through their second moment.
  const GameInstance withb({0, 1, 0, 0}, {D::exponential(1.0)});
  EXPECT_DOUBLE_EQ(dpp::bound_constants(withb, cfg).D2, 2.0 + 4.0);
}

TEST(BoundConstants, PerformanceGapAtDefaults) {
  dpp::Config cfg;
  const auto c = dpp::bound_constants(hidden({1.0, 1.0, 1.0}), cfg);
  const double term1 = 3.0 / 200.0;
  const double term2 = 200.0 * 15.0 / (16.0 * 4e4);
  const double term3 = 4e4 * 3.0 / (200.0 * 1e5);
  const double tail = 1.5 / 1e5 * 3.0 * (200.0 + 2.0 * std::sqrt(8e4) + 1.0);
  EXPECT_NEAR(c.rhs, term1 + term2 + term3 + tail, 1e-12);
  EXPECT_GT(c.rhs, 0.0);
  EXPECT_LT(c.rhs, 0.1);
}

TEST(Config, Validation) {
  dpp::Config c;
  c.alpha = 100.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.T = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.V = -1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  const auto e = dpp::config_for_epsilon(0.1);
  EXPECT_DOUBLE_EQ(e.V, 10.0);
  EXPECT_NEAR(e.alpha, 100.0, 1e-9);
  EXPECT_EQ(e.T, 100u);
  EXPECT_NO_THROW(e.validate());
}

TEST(Run, SingleIterationPicksFirstResource) {
  dpp::Config c;
  c.T = 1;
  const auto r = dpp::run(hidden({1.0, 1.0, 1.0}), c);
  ASSERT_EQ(r.mixture.components.size(), 1u);
  EXPECT_EQ(r.mixture.components[0].weights, (std::vector<double>{0, 0, 0}));
  EXPECT_EQ(r.diagnostics.average_x, (std::vector<double>{1, 0, 0}));
  Rng rng({}, Lane::mixture);
  EXPECT_EQ(choose(r.mixture, std::vector<double>(3, 0.0), rng), 0u);
}

TEST(Run, InvariantsHoldWithPrivateInformation) {
  const GameInstance g({1, 1, 1, 0}, {D::exponential_mean(1.5), D::exponential(1.0), D::uniform(0.0, 2.0)});
  dpp::Config c;
  c.V = 20;
  c.alpha = 400;
  c.T = 20000;
  c.seed = 5;
  c.record_diagnostics = true;
  const auto r = dpp::run(g, c);
  EXPECT_EQ(r.diagnostics.bound_violations, 0u);
  EXPECT_EQ(r.diagnostics.step_violations, 0u);
  EXPECT_EQ(r.diagnostics.box_violations, 0u);
  EXPECT_EQ(r.diagnostics.iterations.size(), c.T);
  EXPECT_EQ(r.mixture.components.size(), c.T);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_LE(r.diagnostics.queue_max[j], r.diagnostics.queue_bound[j]);
  for (const auto& comp : r.mixture.components) EXPECT_EQ(comp.observed, g.partition().private_a());

  const auto again = dpp::run(g, c);
  EXPECT_EQ(again.diagnostics.final_state.Q, r.diagnostics.final_state.Q);

  std::ostringstream os;
  dpp::write_diagnostics_csv(os, r.diagnostics);
  EXPECT_EQ(os.str().rfind("t,max_queue,action\n1,0,1\n", 0), 0u);
}

TEST(Run, ApproachesExplicitOptimum) {
  const auto g = hidden({2.0, 1.0, 1.0});
  dpp::Config c;
  c.T = 50000;
  const auto r = dpp::run(g, c);
  const auto w = worst_case_utility(r.mixture, g);
  EXPECT_NEAR(w.value, 1.0, 0.05);
}
