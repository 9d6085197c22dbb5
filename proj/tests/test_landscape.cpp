#include <cmath>

#include <gtest/gtest.h>

#include "cavity_ising/critical_points.hpp"
#include "cavity_ising/landscape.hpp"

using namespace cavity_ising;
using landscape::PhaseLabel;

namespace {

struct Scan {
  double alpha;
  double energy;
};

Scan dense_scan(const model::ReducedParams& p, int n) {
  const double top = landscape::alpha_upper_bound(p.By_t, p.g_t);
  Scan best{0.0, HUGE_VAL};
  for (int i = 0; i <= n; ++i) {
    const double a = top * i / n;
    const double e = model::reduced_free_energy(a, p);
    if (e < best.energy) best = {a, e};
  }
  return best;
}

}  // namespace

class GlobalMinimum : public ::testing::TestWithParam<std::tuple<double, double, double>> {};

TEST_P(GlobalMinimum, NeverAboveDenseScan) {
  const auto [g, By, beta] = GetParam();
  const model::ReducedParams p{g, By, beta};
  const auto r = landscape::minimize_landscape(p);
  const int n = std::isinf(beta) ? 20000 : 2000;
  const auto s = dense_scan(p, n);
  EXPECT_LE(r.energy, s.energy + 1e-12);
  EXPECT_NEAR(r.energy, model::reduced_free_energy(r.alpha_star, p), 1e-12);
  if (!r.degenerate) {
    const double spacing = landscape::alpha_upper_bound(By, g) / n;
    EXPECT_NEAR(r.alpha_star, s.alpha, 2.0 * spacing + 1e-3) << "g=" << g << " By=" << By;
  }
  EXPECT_NEAR(r.h_star, std::hypot(By, r.alpha_star), 1e-12);
}

INSTANTIATE_TEST_SUITE_P(ZeroTemperature, GlobalMinimum,
                         ::testing::Combine(::testing::Values(0.5, 1.0, 1.3, 1.383, 1.42, 1.46, 1.7, 2.5),
                                            ::testing::Values(0.0, 0.3, 0.8, 0.99, 1.0, 1.01, 1.15, 1.6, 3.0),
                                            ::testing::Values(model::kInfinity)));

INSTANTIATE_TEST_SUITE_P(FiniteTemperature, GlobalMinimum,
                         ::testing::Combine(::testing::Values(0.8, 1.4, 2.0),
                                            ::testing::Values(0.0, 0.7, 1.2),
                                            ::testing::Values(0.5, 3.0, 20.0)));

TEST(Landscape, KinkIsAlwaysACandidateBelowUnitField) {
  const auto r = landscape::minimize_landscape({1.2, 0.6});
  bool has_kink = false;
  for (const auto& c : r.candidates) has_kink = has_kink || c.branch == landscape::Branch::Kink;
  EXPECT_TRUE(has_kink);
  ASSERT_TRUE(r.kink_alpha.has_value());
  EXPECT_NEAR(*r.kink_alpha, std::sqrt(1.0 - 0.36), 1e-15);
}

TEST(Landscape, DegenerateAtPointA) {
  const auto A = critical::locate_point_A();
  const auto r = landscape::minimize_landscape({A.g_t, 0.0});
  EXPECT_TRUE(r.degenerate);
  EXPECT_NEAR(r.alpha_star, A.h0, 1e-6);
}

TEST(Landscape, ZeroCouplingIsNormal) {
  const auto r = landscape::minimize_landscape({0.0, 0.5});
  EXPECT_EQ(r.alpha_star, 0.0);
}

TEST(Landscape, StationaryPointsOfCubic) {
  const auto pts = landscape::stationary_points([](double x) { return 3.0 * x * x - 3.0; }, -2.0, 2.0, 100,
                                                numerics::Tolerance{1e-14, 1e-14, 100});
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_NEAR(pts[0].h, -1.0, 1e-12);
  EXPECT_FALSE(pts[0].is_minimum);
  EXPECT_NEAR(pts[1].h, 1.0, 1e-12);
  EXPECT_TRUE(pts[1].is_minimum);
}

TEST(Phases, RepresentativePoints) {
  EXPECT_EQ(landscape::classify_phase({1.0, 0.0}).label, PhaseLabel::AFN);
  EXPECT_EQ(landscape::classify_phase({2.0, 0.0}).label, PhaseLabel::PSR);
  EXPECT_EQ(landscape::classify_phase({0.5, 2.0}).label, PhaseLabel::PN);
  EXPECT_EQ(landscape::classify_phase({2.0, 0.0, 1.0}).label, PhaseLabel::Superradiant);
  EXPECT_EQ(landscape::classify_phase({0.5, 0.5, 1.0}).label, PhaseLabel::NormalFiniteT);
}

TEST(Phases, StaggeredMagnetization) {
  EXPECT_EQ(landscape::staggered_magnetization(0.0), 1.0);
  EXPECT_NEAR(landscape::staggered_magnetization(0.6), std::pow(0.64, 0.125), 1e-15);
  EXPECT_EQ(landscape::staggered_magnetization(1.0), 0.0);
  EXPECT_EQ(landscape::staggered_magnetization(1.5), 0.0);
}

TEST(Phases, SuperradiantBelowUnitFieldFlag) {
  const auto ph = landscape::classify_phase({1.3, 0.2});
  if (ph.label == PhaseLabel::PSR) {
    EXPECT_EQ(ph.superradiant_below_unit_field, ph.h_t < 1.0);
  }
  const auto strong = landscape::classify_phase({3.0, 0.0});
  EXPECT_EQ(strong.label, PhaseLabel::PSR);
  EXPECT_FALSE(strong.superradiant_below_unit_field);
}

TEST(Sweep, OrderedGridRequired) {
  EXPECT_THROW(landscape::order_parameter_sweep(1.3, {0.5, 0.4}), DomainError);
  const auto s = landscape::order_parameter_sweep(1.3, {0.2, 0.4, 1.5});
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[2].By_t, 1.5);
}

TEST(Susceptibility, NormalPhaseEqualsKernelCurvature) {
  // With α̃* = 0, ε_min = −I(B̃y) so χ⊥ = I''(B̃y).
  for (double By : {0.5, 1.5, 3.0}) {
    EXPECT_NEAR(landscape::transverse_susceptibility(0.5, By), special::ising_kernel_d2(By), 1e-6) << By;
  }
}

TEST(Susceptibility, SuperradiantPlateau) {
  // In the superradiant phase h̃* is independent of B̃y, so χ⊥ = 2/g̃².
  const double g = 1.8;
  for (double By : {0.3, 1.2}) {
    EXPECT_NEAR(landscape::transverse_susceptibility(g, By), 2.0 / (g * g), 1e-6) << By;
  }
}

TEST(Susceptibility, SingularAtUnitField) {
  EXPECT_THROW(landscape::transverse_susceptibility(0.5, 1.0), SingularPoint);
}

TEST(Susceptibility, FiniteTemperatureIsSmooth) {
  const double beta = 2.0;
  const double chi = landscape::transverse_susceptibility(0.5, 1.0, beta);
  EXPECT_NEAR(chi, model::thermal_kernel_d2(1.0, beta), 1e-5);
}
