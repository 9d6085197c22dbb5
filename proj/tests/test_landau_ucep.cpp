#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "cavity_ising/landau_ucep.hpp"

using namespace cavity_ising;
using landau::LandauParams;
using landau::LandauPhase;
using landau::TransitionOrder;

namespace {

// Dense-scan minimum of f over α̃ ∈ [0, 3].
double scan_min(const LandauParams& p) {
  double best = HUGE_VAL;
  for (int i = 0; i <= 60000; ++i) best = std::min(best, landau::f_landau(3.0 * i / 60000, p));
  return best;
}

}  // namespace

TEST(Landau, FunctionAndDerivative) {
  EXPECT_EQ(landau::f_of_v(0.0, 0.3), 0.0);
  for (double v : {-0.7, -0.1, 0.05, 0.4}) {
    const auto d = numerics::first_derivative([](double x) { return landau::f_of_v(x, 0.3); }, v, 1e-4);
    EXPECT_NEAR(landau::df_dv(v, 0.3), d.value, 1e-9) << v;
  }
  EXPECT_EQ(landau::f_landau(0.5, {0.2, -0.1}), landau::f_landau(-0.5, {0.2, -0.1}));
}

class LandauMinimum : public ::testing::TestWithParam<std::pair<double, double>> {};

TEST_P(LandauMinimum, MatchesDenseScan) {
  const auto [c1, c2] = GetParam();
  const LandauParams p{c1, c2};
  const auto r = landau::minimize_landau(p);
  EXPECT_LE(r.energy, scan_min(p) + 1e-12);
  EXPECT_NEAR(r.energy, landau::f_landau(r.alpha_star, p), 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Grid, LandauMinimum,
                         ::testing::Values(std::pair{0.1, -0.2}, std::pair{0.3, -0.05}, std::pair{0.3, 0.2},
                                           std::pair{0.4, 0.03}, std::pair{0.4, 0.3}, std::pair{0.6, 0.1},
                                           std::pair{-0.2, 0.5}, std::pair{1.0, -0.3}));

TEST(Landau, CriticalPointsAnalytic) {
  const auto cp = landau::landau_critical_points();
  EXPECT_NEAR(cp.ucep.c1, 1.0 / std::numbers::e, 1e-16);
  EXPECT_EQ(cp.ucep.c2, 0.0);
  EXPECT_NEAR(cp.tcp.c1, 2.0 * std::exp(-1.5), 1e-16);
  EXPECT_NEAR(cp.tcp.c2, std::exp(-1.5), 1e-16);
  const auto r = landau::minimize_landau(cp.ucep);
  EXPECT_TRUE(r.degenerate);
  EXPECT_NEAR(r.alpha_star * r.alpha_star, 1.0 / std::numbers::e, 1e-12);
}

TEST(Landau, TcpHasFlatInflection) {
  const auto cp = landau::landau_critical_points();
  const double v = cp.tcp.c2;
  EXPECT_NEAR(landau::df_dv(v, cp.tcp.c1), 0.0, 1e-15);
  const auto d2 = numerics::second_derivative([&](double x) { return landau::f_of_v(x, cp.tcp.c1); }, v, 1e-3);
  EXPECT_NEAR(d2.value, 0.0, 1e-8);
  // The third u-derivative is 2/v, so the point is a flat inflection.
  const auto d3 = numerics::first_derivative(
      [&](double x) { return 2.0 * std::log(x) + 3.0; }, v, 1e-3);
  EXPECT_NEAR(d3.value, 2.0 / v, 1e-6);
}

TEST(Landau, SweepAboveUcep) {
  // c₁ between the UCEP and TCP: continuous, then first order, then continuous.
  const auto t = landau::landau_sweep(0.40, -0.2, 0.5, 400);
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0].order, TransitionOrder::Continuous);
  EXPECT_NEAR(t[0].c2, 0.0, 1e-9);
  EXPECT_EQ(t[0].from, LandauPhase::Ordered);
  EXPECT_EQ(t[0].to, LandauPhase::Normal);
  EXPECT_EQ(t[1].order, TransitionOrder::First);
  EXPECT_EQ(t[1].to, LandauPhase::Superradiant);
  EXPECT_EQ(t[2].order, TransitionOrder::Continuous);
  EXPECT_EQ(t[2].to, LandauPhase::Normal);
}

TEST(Landau, SweepBelowUcep) {
  const auto t = landau::landau_sweep(0.30, -0.2, 0.5, 400);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0].order, TransitionOrder::First);
  EXPECT_EQ(t[0].from, LandauPhase::Ordered);
  EXPECT_EQ(t[0].to, LandauPhase::Superradiant);
  EXPECT_EQ(t[1].order, TransitionOrder::Continuous);
}

TEST(Landau, SweepAboveTcpHasNoSuperradiance) {
  const auto t = landau::landau_sweep(0.6, -0.2, 0.5, 200);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].order, TransitionOrder::Continuous);
  EXPECT_THROW(landau::landau_sweep(0.6, 0.5, -0.2, 200), DomainError);
}

TEST(Landau, ModelMapRoundTrip) {
  const auto m = landau::map_to_model({0.2, -0.1});
  const auto back = landau::map_from_model(m.By_t, m.g_t);
  EXPECT_NEAR(back.c1, 0.2, 1e-13);
  EXPECT_NEAR(back.c2, -0.1, 1e-13);
  const auto cp = landau::landau_critical_points();
  const auto b = landau::map_to_model(cp.ucep);
  EXPECT_NEAR(b.g_t, 4.0 * std::sqrt(std::numbers::e / (1.0 + 8.0 * std::numbers::e)), 1e-14);
  const auto c = landau::map_to_model(cp.tcp);
  EXPECT_NEAR(c.By_t, 1.0 + 0.5 * std::exp(-1.5), 1e-15);
  EXPECT_THROW(landau::map_to_model({-8.0, 0.0}), DomainError);
}

TEST(Landau, SusceptibilityLogarithm) {
  const LandauParams p{1.0, 0.0};
  // χ = 2 ln|v| + 3: each factor 100 in |v| moves χ by 2 ln 100.
  const double a = landau::landau_susceptibility(p, 1e-1);
  const double b = landau::landau_susceptibility(p, 1e-2);
  EXPECT_NEAR(a - b, 2.0 * std::log(100.0), 1e-12);
  EXPECT_NEAR(a, 2.0 * std::log(1e-2) + 3.0, 1e-12);
  const auto d2 = numerics::second_derivative([](double v) { return landau::f_of_v(v, 1.0); }, -0.05, 1e-3);
  EXPECT_NEAR(landau::landau_susceptibility({1.0, -0.05}, 0.0), d2.value, 1e-7);
  EXPECT_THROW(landau::landau_susceptibility(p, 0.0), SingularPoint);
}

TEST(Landau, PhaseDiagramContainsCriticalPoints) {
  const auto d = landau::landau_phase_diagram({0.2, 0.6}, {-0.3, 0.5}, 8);
  EXPECT_FALSE(d.transitions.empty());
  bool first = false, cont = false;
  for (const auto& t : d.transitions) {
    first = first || t.order == TransitionOrder::First;
    cont = cont || t.order == TransitionOrder::Continuous;
  }
  EXPECT_TRUE(first);
  EXPECT_TRUE(cont);
  EXPECT_THROW(landau::landau_phase_diagram({0.5, 0.6}, {-0.3, 0.5}, 8), DomainError);
}
