#include <cmath>

#include <gtest/gtest.h>

#include "cavity_ising/critical_points.hpp"
#include "cavity_ising/finite_temperature.hpp"

using namespace cavity_ising;

namespace {

// Normal-phase instability by direct landscape minimization: the largest
// g̃ on a bisection where α̃* = 0.
double g_star_by_minimization(double beta, double By) {
  double lo = 0.5, hi = 3.0;
  for (int i = 0; i < 40; ++i) {
    const double mid = 0.5 * (lo + hi);
    const auto r = landscape::minimize_landscape({mid, By, beta});
    (r.alpha_star > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(Transition, HighTemperatureIsSecondOrder) {
  const auto r = thermal::transition_at(0.5, 0.0);
  EXPECT_EQ(r.order, thermal::Order::Second);
  // Continuous onset: g*² = 2/K″(0).
  EXPECT_NEAR(r.g_star, std::sqrt(2.0 / model::thermal_kernel_d2(0.0, 0.5)), 1e-6);
}

TEST(Transition, AgreesWithLandscapeMinimization) {
  for (auto [beta, By] : {std::pair{0.5, 0.0}, std::pair{5.0, 0.0}, std::pair{5.0, 2.0}, std::pair{2.0, 0.8}}) {
    const auto r = thermal::transition_at(beta, By);
    EXPECT_NEAR(r.g_star, g_star_by_minimization(beta, By), 1e-6) << beta << " " << By;
  }
}

TEST(Transition, LowTemperatureIsFirstOrderAtZeroField) {
  const auto r = thermal::transition_at(5.0, 0.0);
  EXPECT_EQ(r.order, thermal::Order::First);
  EXPECT_GT(r.jump, 1.0);
}

TEST(Transition, ZeroTemperatureLimitIsPointA) {
  const auto A = critical::locate_point_A();
  EXPECT_NEAR(thermal::transition_at(model::kInfinity, 0.0).g_star, A.g_t, 1e-6);
  EXPECT_NEAR(thermal::transition_at(200.0, 0.0).g_star, A.g_t, 1e-6);
}

TEST(QuarticCoefficient, MatchesFourthDerivative) {
  // c₄ is the h⁴ coefficient of K_β(h) at B̃y = 0: K⁗(0)/24.
  for (double beta : {0.8, 1.5, 4.0}) {
    auto d2 = [beta](double h) { return model::thermal_kernel_d2(std::fabs(h), beta); };
    const auto d4 = numerics::second_derivative(d2, 0.0, 0.05);
    EXPECT_NEAR(thermal::quartic_coefficient(beta), d4.value / 24.0, 1e-6) << beta;
  }
  EXPECT_NEAR(thermal::quartic_coefficient(model::kInfinity), std::numbers::pi / 128.0, 1e-15);
}

TEST(CriticalBeta, SignChangeOfQuartic) {
  const double bc = thermal::critical_beta();
  EXPECT_NEAR(bc, 1.14299, 2e-3);
  EXPECT_LT(thermal::quartic_coefficient(bc - 0.01), 0.0);
  EXPECT_GT(thermal::quartic_coefficient(bc + 0.01), 0.0);
  EXPECT_EQ(thermal::transition_at(0.9 * bc, 0.0).order, thermal::Order::Second);
  EXPECT_EQ(thermal::transition_at(1.1 * bc, 0.0).order, thermal::Order::First);
}

TEST(OrderBoundary, ApproachesTcpAtLowTemperature) {
  const auto C = critical::locate_tcp();
  EXPECT_NEAR(thermal::order_switch_field(50.0), C.By_t, 0.02);
  const auto ob = thermal::order_boundary(16);
  ASSERT_EQ(ob.size(), 16u);
  EXPECT_EQ(ob.front().By_t, 0.0);
  for (std::size_t i = 1; i < ob.size(); ++i) EXPECT_GT(ob[i].beta_t, ob[i - 1].beta_t);
  EXPECT_THROW(thermal::order_boundary(8), DomainError);
}

TEST(OrderBoundary, SeparatesOrders) {
  const double beta = 10.0;
  const double sw = thermal::order_switch_field(beta);
  EXPECT_EQ(thermal::transition_at(beta, sw - 0.05).order, thermal::Order::First);
  EXPECT_EQ(thermal::transition_at(beta, sw + 0.05).order, thermal::Order::Second);
}

TEST(Phases, NoAntiferromagnetAtFiniteTemperature) {
  for (double beta : {0.3, 2.0, 30.0}) {
    for (double g : {0.2, 1.0, 2.0}) {
      EXPECT_NE(landscape::classify_phase({g, 0.2, beta}).label, landscape::PhaseLabel::AFN);
    }
  }
}

TEST(Curvature, NormalBranch) {
  const auto c = thermal::normal_branch_curvature(0.8, 5.0);
  EXPECT_NEAR(c.f, -model::kReducedToPerSite * model::thermal_kernel(0.8, 5.0), 1e-15);
  auto f = [](double By) { return thermal::normal_branch_curvature(By, 5.0).f; };
  EXPECT_NEAR(c.f_dd, numerics::second_derivative(f, 0.8, 1e-2).value, 1e-6);
  // The cusp at B̃y = 1 sharpens as β̃ grows.
  EXPECT_LT(thermal::normal_branch_curvature(1.0, 100.0).f_dd, thermal::normal_branch_curvature(1.0, 10.0).f_dd);
  EXPECT_THROW(thermal::normal_branch_curvature(1.0, model::kInfinity), DomainError);
}
