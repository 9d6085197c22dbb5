#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "cavity_ising/model.hpp"
#include "cavity_ising/numerics.hpp"

using namespace cavity_ising;

namespace {

// ln 2cosh(βω) summed by the trapezoid rule over a full period in k.
double thermal_by_trapezoid(double h, double beta, int n = 20000) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double k = -std::numbers::pi + 2.0 * std::numbers::pi * i / n;
    const double w = std::sqrt(1.0 + h * h - 2.0 * h * std::cos(k));
    s += std::log(2.0 * std::cosh(beta * w));
  }
  return s * (2.0 * std::numbers::pi / n) / (4.0 * beta);
}

}  // namespace

TEST(Reduction, ParameterMap) {
  const model::PhysicalParams p{2.0, 0.5, 0.3, 0.4, 0.25};
  const auto r = model::reduce_parameters(p);
  EXPECT_NEAR(r.g_t, 2.0 * std::sqrt(2.0) * 0.3 / std::sqrt(std::numbers::pi * 0.5 * 2.0), 1e-15);
  EXPECT_DOUBLE_EQ(r.By_t, 0.8);
  EXPECT_DOUBLE_EQ(r.beta_t, 2.0);
  const auto z = model::reduce_parameters({1.0, 1.0, 0.1, 0.0, 0.0});
  EXPECT_TRUE(z.zero_temperature());
}

TEST(Reduction, Validation) {
  EXPECT_THROW(model::reduce_parameters({0.0, 1.0, 0.1, 0.0, 0.0}), DomainError);
  EXPECT_THROW(model::reduce_parameters({1.0, -1.0, 0.1, 0.0, 0.0}), DomainError);
  EXPECT_THROW(model::reduce_parameters({1.0, 1.0, -0.1, 0.0, 0.0}), DomainError);
  EXPECT_THROW((model::ReducedParams{1.0, 0.5, 0.0}.validate()), DomainError);
  EXPECT_THROW((model::ReducedParams{1.0, -0.5}.validate()), DomainError);
}

TEST(ZeroTemperature, EpsilonDerivativesMatchFiniteDifferences) {
  for (double g : {0.8, 1.4}) {
    for (double h : {0.3, 0.7, 1.3, 2.5}) {
      auto f = [g](double x) { return model::epsilon_g(x, g); };
      EXPECT_NEAR(model::epsilon_g_d1(h, g), numerics::first_derivative(f, h, 1e-3).value, 1e-9);
      EXPECT_NEAR(model::epsilon_g_d2(h, g), numerics::second_derivative(f, h, 1e-2).value, 1e-6);
    }
  }
}

TEST(ZeroTemperature, LandscapeAgreesWithEpsilonUpToConstant) {
  // ε(α̃) − ε_g(h̃) = −B̃y²/g̃² for every α̃.
  const double g = 1.3, By = 0.6;
  for (double a : {0.0, 0.2, 0.9, 2.0}) {
    EXPECT_NEAR(model::landscape_energy(a, By, g) - model::epsilon_g(std::hypot(By, a), g), -By * By / (g * g), 1e-14);
  }
}

TEST(ZeroTemperature, Z2Evenness) {
  for (double a : {0.1, 0.5, 1.7}) {
    EXPECT_EQ(model::landscape_energy(a, 0.4, 1.2), model::landscape_energy(-a, 0.4, 1.2));
  }
}

TEST(ZeroTemperature, CouplingMustBePositive) {
  EXPECT_THROW(model::epsilon_g(1.0, 0.0), DomainError);
  EXPECT_THROW(model::landscape_energy(0.1, -1.0, 1.0), DomainError);
}

TEST(ThermalKernel, UniformDispersionAtZeroField) {
  for (double beta : {0.1, 1.0, 7.0, 300.0}) {
    const double exact = std::numbers::pi / (2.0 * beta) * model::detail::log_two_cosh(beta);
    EXPECT_NEAR(model::thermal_kernel(0.0, beta), exact, 1e-12 * std::max(1.0, exact)) << beta;
  }
}

TEST(ThermalKernel, AgreesWithTrapezoid) {
  for (double h : {0.3, 0.9, 1.0, 1.4, 3.0}) {
    for (double beta : {0.5, 2.0, 10.0}) {
      const int n = (h == 1.0) ? 400000 : 20000;
      EXPECT_NEAR(model::thermal_kernel(h, beta), thermal_by_trapezoid(h, beta, n), h == 1.0 ? 1e-9 : 1e-11)
          << h << " " << beta;
    }
  }
}

TEST(ThermalKernel, LowTemperatureLimit) {
  for (double h : {0.4, 1.6}) {
    // Gapped chain: corrections are exponentially small in β|1 − h|.
    EXPECT_NEAR(model::thermal_kernel(h, 400.0), special::ising_kernel(h), 1e-12) << h;
  }
}

TEST(ThermalKernel, DerivativesMatchFiniteDifferences) {
  for (double beta : {0.7, 5.0}) {
    for (double h : {0.0, 0.5, 1.0, 1.8}) {
      auto f = [beta](double x) { return model::thermal_kernel(std::fabs(x), beta); };
      EXPECT_NEAR(model::thermal_kernel_d1(h, beta), numerics::first_derivative(f, h, 1e-3).value, 1e-9);
      EXPECT_NEAR(model::thermal_kernel_d2(h, beta), numerics::second_derivative(f, h, 1e-2).value, 1e-6);
    }
  }
}

TEST(ThermalKernel, RejectsInfiniteBeta) {
  EXPECT_THROW(model::thermal_kernel(0.5, model::kInfinity), DomainError);
  EXPECT_THROW(model::thermal_kernel(-0.5, 1.0), DomainError);
}

TEST(FreeEnergy, ConventionsAndEvenness) {
  const double a = 0.4, By = 0.3, g = 1.1, beta = 3.0;
  const double phi = model::phi_T(a, By, g, beta);
  EXPECT_NEAR(model::free_energy_unreduced(a, By, g, beta), 2.0 / std::numbers::pi * phi, 1e-15);
  EXPECT_EQ(phi, model::phi_T(-a, By, g, beta));
  const model::ReducedParams p{g, By, beta};
  EXPECT_EQ(model::reduced_free_energy(a, p), phi);
  const model::ReducedParams z{g, By};
  EXPECT_EQ(model::reduced_free_energy(a, z), model::landscape_energy(a, By, g));
}

TEST(FreeEnergy, OriginExample) {
  // At α̃ = 0 the field-free chain reduces to the uniform-dispersion result.
  const double beta = 2.0;
  const double expected = -std::numbers::pi / (2.0 * beta) * std::log(2.0 * std::cosh(beta));
  EXPECT_NEAR(model::phi_T(0.0, 0.0, 1.0, beta), expected, 1e-12);
}

TEST(BandKernel, DispatchesOnTemperature) {
  const model::BandKernel zero(model::kInfinity), warm(4.0);
  EXPECT_TRUE(zero.zero_temperature());
  EXPECT_EQ(zero.value(0.7), special::ising_kernel(0.7));
  EXPECT_EQ(warm.d1(0.7), model::thermal_kernel_d1(0.7, 4.0));
  EXPECT_THROW(model::BandKernel(0.0), DomainError);
}
