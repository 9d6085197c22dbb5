#pragma once

// Reduced parameters and energy functionals of the cavity-coupled transverse
// Ising chain in the thermodynamic limit.
//
// Two normalizations are used:
//   reduced  ε = π E / (2 J N)   (zero temperature) and φ = π F / (2 J N)
//   per-site f = F / (N J) = (2/π) φ
//
// The landscape over the superradiant amplitude α̃ is
//   ε(α̃) = α̃²/g̃² − K(h̃),   h̃ = sqrt(B̃y² + α̃²),
// where K is the band kernel: I(h̃) at T = 0 and the thermal kernel at finite
// β̃. The function epsilon_g(h̃, g̃) = h̃²/g̃² − I(h̃) differs from ε by the
// α̃-independent constant B̃y²/g̃², so both have the same minimizers.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "cavity_ising/errors.hpp"
#include "cavity_ising/numerics.hpp"
#include "cavity_ising/special_functions.hpp"

namespace cavity_ising::model {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Conversion factor from the reduced density φ to f = F/(NJ).
inline constexpr double kReducedToPerSite = 2.0 / std::numbers::pi;

struct PhysicalParams {
  double omega;  // cavity frequency
  double J;      // Ising coupling (antiferromagnetic, > 0)
  double g;      // atom-cavity coupling
  double B_y;    // transverse field
  double T;      // temperature, k_B = 1

  void validate() const {
    if (!(omega > 0.0)) throw DomainError("PhysicalParams: omega must be > 0");
    if (!(J > 0.0)) throw DomainError("PhysicalParams: J must be > 0");
    if (!(g >= 0.0) || !(B_y >= 0.0) || !(T >= 0.0)) {
      throw DomainError("PhysicalParams: g, B_y and T must be >= 0");
    }
  }
};

/// Dimensionless control point. beta_t = +infinity encodes T = 0.
struct ReducedParams {
  double g_t;
  double By_t;
  double beta_t = kInfinity;

  [[nodiscard]] bool zero_temperature() const { return std::isinf(beta_t); }

  void validate() const {
    if (!(g_t >= 0.0) || !(By_t >= 0.0)) {
      throw DomainError("ReducedParams: g_t and By_t must be >= 0");
    }
    if (!(beta_t > 0.0)) throw DomainError("ReducedParams: beta_t must be > 0");
  }
};

/// Transverse field seen by the rotated chain.
struct EffectiveField {
  double h_t;
  double alpha_t;

  static EffectiveField from(double By_t, double alpha_t) {
    const double a = std::fabs(alpha_t);
    return {std::hypot(By_t, a), a};
  }
};

inline ReducedParams reduce_parameters(const PhysicalParams& p) {
  p.validate();
  ReducedParams r;
  r.g_t = 2.0 * std::numbers::sqrt2 * p.g / std::sqrt(std::numbers::pi * p.J * p.omega);
  r.By_t = p.B_y / p.J;
  r.beta_t = (p.T == 0.0) ? kInfinity : p.J / p.T;
  return r;
}

// ---------------------------------------------------------------------------
// Zero temperature
// ---------------------------------------------------------------------------

inline void require_coupling(double g_t) {
  if (!(g_t > 0.0)) throw DomainError("coupling g_t must be > 0");
}

/// ε_g(h̃) = h̃²/g̃² − I(h̃).
inline double epsilon_g(double h_t, double g_t) {
  require_coupling(g_t);
  if (!(h_t >= 0.0)) throw DomainError("epsilon_g: h_t must be >= 0");
  return h_t * h_t / (g_t * g_t) - special::ising_kernel(h_t);
}

inline double epsilon_g_d1(double h_t, double g_t) {
  require_coupling(g_t);
  if (!(h_t >= 0.0)) throw DomainError("epsilon_g_d1: h_t must be >= 0");
  return 2.0 * h_t / (g_t * g_t) - special::ising_kernel_d1(h_t);
}

inline double epsilon_g_d2(double h_t, double g_t) {
  require_coupling(g_t);
  if (!(h_t >= 0.0)) throw DomainError("epsilon_g_d2: h_t must be >= 0");
  return 2.0 / (g_t * g_t) - special::ising_kernel_d2(h_t);
}

/// Zero-temperature landscape ε(α̃) = α̃²/g̃² − I(sqrt(B̃y² + α̃²)).
inline double landscape_energy(double alpha_t, double By_t, double g_t) {
  require_coupling(g_t);
  if (!(By_t >= 0.0)) throw DomainError("landscape_energy: By_t must be >= 0");
  const auto f = EffectiveField::from(By_t, alpha_t);
  return f.alpha_t * f.alpha_t / (g_t * g_t) - special::ising_kernel(f.h_t);
}

// ---------------------------------------------------------------------------
// Finite temperature
// ---------------------------------------------------------------------------

inline numerics::Tolerance thermal_tolerance() { return {1e-14, 1e-13, 200}; }

namespace detail {

// h − cos k and ω_k written without cancellation near h = 1, k = 0.
inline double field_minus_cos(double h, double k) {
  const double s = std::sin(0.5 * k);
  return (h - 1.0) + 2.0 * s * s;
}

inline double dispersion(double h, double k) {
  const double s = std::sin(0.5 * k);
  return std::sqrt((1.0 - h) * (1.0 - h) + 4.0 * h * s * s);
}

// ln(2 cosh x) without overflow.
inline double log_two_cosh(double x) {
  const double ax = std::fabs(x);
  return ax + std::log1p(std::exp(-2.0 * ax));
}

// Breakpoint where the thermal and gap scales resolve near k = 0.
inline std::vector<double> kernel_breaks(double h, double beta) {
  const double scale = std::max(std::fabs(h - 1.0), 1.0 / beta);
  std::vector<double> breaks;
  for (double s : {2.0 * scale, 20.0 * scale}) {
    if (s < 0.5 * std::numbers::pi) breaks.push_back(s);
  }
  return breaks;
}

inline void require_thermal(double h, double beta) {
  if (!(h >= 0.0)) throw DomainError("thermal kernel: h must be >= 0");
  if (!(beta > 0.0) || std::isinf(beta)) {
    throw DomainError("thermal kernel: beta must be finite and > 0");
  }
}

}  // namespace detail

/// K_β(h) = (1/(2β)) ∫_0^π ln[2 cosh(β ω_k)] dk,  ω_k = sqrt((h − cos k)² + sin² k).
/// Tends to I(h) as β → ∞.
inline double thermal_kernel(double h, double beta,
                             const numerics::Tolerance& tol = thermal_tolerance()) {
  detail::require_thermal(h, beta);
  auto integrand = [&](double k) { return detail::log_two_cosh(beta * detail::dispersion(h, k)); };
  return numerics::integrate_piecewise(integrand, 0.0, std::numbers::pi,
                                       detail::kernel_breaks(h, beta), tol) /
         (2.0 * beta);
}

/// dK_β/dh = (1/2) ∫_0^π tanh(β ω_k) (h − cos k)/ω_k dk.
inline double thermal_kernel_d1(double h, double beta,
                                const numerics::Tolerance& tol = thermal_tolerance()) {
  detail::require_thermal(h, beta);
  auto integrand = [&](double k) {
    const double w = detail::dispersion(h, k);
    if (w == 0.0) return 0.0;
    return std::tanh(beta * w) * detail::field_minus_cos(h, k) / w;
  };
  return 0.5 * numerics::integrate_piecewise(integrand, 0.0, std::numbers::pi,
                                             detail::kernel_breaks(h, beta), tol);
}

/// d²K_β/dh² = (1/2) ∫_0^π [β sech²(βω)(h − cos k)²/ω² + tanh(βω) sin² k/ω³] dk.
inline double thermal_kernel_d2(double h, double beta,
                                const numerics::Tolerance& tol = thermal_tolerance()) {
  detail::require_thermal(h, beta);
  auto integrand = [&](double k) {
    const double w = detail::dispersion(h, k);
    const double s = std::sin(k);
    const double x = beta * w;
    const double tanh_over_w = (x < 1e-8) ? beta : std::tanh(x) / w;
    double term1 = 0.0;
    if (w > 0.0 && x < 350.0) {
      const double sech = 1.0 / std::cosh(x);
      const double c = detail::field_minus_cos(h, k) / w;
      term1 = beta * sech * sech * c * c;
    }
    const double term2 = (w > 0.0) ? tanh_over_w * s * s / (w * w) : 0.0;
    return term1 + term2;
  };
  return 0.5 * numerics::integrate_piecewise(integrand, 0.0, std::numbers::pi,
                                             detail::kernel_breaks(h, beta), tol);
}

/// Reduced finite-temperature free-energy density
///   φ_T = α̃²/g̃² − (1/(4β̃)) ∫_{−π}^{π} ln[2 cosh(β̃ ω_k)] dk.
inline double phi_T(double alpha_t, double By_t, double g_t, double beta_t,
                    const numerics::Tolerance& tol = thermal_tolerance()) {
  require_coupling(g_t);
  if (!(By_t >= 0.0)) throw DomainError("phi_T: By_t must be >= 0");
  const auto f = EffectiveField::from(By_t, alpha_t);
  return f.alpha_t * f.alpha_t / (g_t * g_t) - thermal_kernel(f.h_t, beta_t, tol);
}

/// f = F/(NJ) = (2/π) φ_T.
inline double free_energy_unreduced(double alpha_t, double By_t, double g_t, double beta_t,
                                    const numerics::Tolerance& tol = thermal_tolerance()) {
  return kReducedToPerSite * phi_T(alpha_t, By_t, g_t, beta_t, tol);
}

/// Reduced density at any temperature; T = 0 dispatches to the elliptic form.
inline double reduced_free_energy(double alpha_t, const ReducedParams& p,
                                  const numerics::Tolerance& tol = thermal_tolerance()) {
  if (p.zero_temperature()) return landscape_energy(alpha_t, p.By_t, p.g_t);
  return phi_T(alpha_t, p.By_t, p.g_t, p.beta_t, tol);
}

// ---------------------------------------------------------------------------
// Band kernel selected by temperature
// ---------------------------------------------------------------------------

/// K(h) and derivatives: I(h) at T = 0, K_β(h) otherwise.
class BandKernel {
 public:
  explicit BandKernel(double beta_t, numerics::Tolerance tol = thermal_tolerance())
      : beta_(beta_t), tol_(tol) {
    if (!(beta_t > 0.0)) throw DomainError("BandKernel: beta_t must be > 0");
  }

  [[nodiscard]] bool zero_temperature() const { return std::isinf(beta_); }
  [[nodiscard]] double beta() const { return beta_; }

  [[nodiscard]] double value(double h) const {
    return zero_temperature() ? special::ising_kernel(h) : thermal_kernel(h, beta_, tol_);
  }
  [[nodiscard]] double d1(double h) const {
    return zero_temperature() ? special::ising_kernel_d1(h) : thermal_kernel_d1(h, beta_, tol_);
  }
  [[nodiscard]] double d2(double h) const {
    return zero_temperature() ? special::ising_kernel_d2(h) : thermal_kernel_d2(h, beta_, tol_);
  }

 private:
  double beta_;
  numerics::Tolerance tol_;
};

}  // namespace cavity_ising::model
