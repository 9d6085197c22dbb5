#pragma once

// Normal/superradiant transitions of the finite-temperature landscape.
//
// With ψ(h̃) = h̃²/g̃² − K(h̃) the superradiant state at field h̃ > B̃y beats
// α̃ = 0 exactly when 1/g̃² < Q(h̃) = (K(h̃) − K(B̃y))/(h̃² − B̃y²). The
// transition coupling is therefore g̃*² = 1/sup Q. A supremum approached as
// h̃ → B̃y (value K′(B̃y)/(2B̃y), or K″(0)/2 at B̃y = 0) is a continuous onset;
// an interior argmax h̃₁ gives a jump α̃ = sqrt(h̃₁² − B̃y²).
//
// Q is a weighted mean of R(s)/2 = K′(s)/(2s) over [B̃y, h̃], and R has a
// single maximum, so the transition is first order exactly when R′(B̃y) > 0.
// The order switch therefore sits at the argmax of R.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string_view>
#include <vector>

#include "cavity_ising/errors.hpp"
#include "cavity_ising/model.hpp"
#include "cavity_ising/numerics.hpp"

namespace cavity_ising::thermal {

enum class Order { First, Second };

inline std::string_view to_string(Order o) { return o == Order::First ? "first" : "second"; }

inline constexpr double kJumpThreshold = 1e-3;

struct TransitionRecord {
  double beta_t;
  double By_t;
  double g_star;
  Order order;
  double jump;
  double h_jump;  // field of the superradiant state at g̃*; equals B̃y for a continuous onset
};

/// Q(h̃) = (K(h̃) − K(B̃y))/(h̃² − B̃y²) for h̃ > B̃y.
inline double onset_ratio(const model::BandKernel& K, double By, double K_By, double h) {
  return (K.value(h) - K_By) / ((h - By) * (h + By));
}

/// lim_{h̃→B̃y⁺} Q(h̃).
inline double onset_ratio_boundary(const model::BandKernel& K, double By) {
  return By == 0.0 ? 0.5 * K.d2(0.0) : K.d1(By) / (2.0 * By);
}

/// Transition coupling at fixed (β̃, B̃y); β̃ = ∞ selects T = 0.
inline TransitionRecord transition_at(double beta_t, double By_t, double jump_threshold = kJumpThreshold) {
  if (!(beta_t > 0.0)) throw DomainError("transition_at: beta_t must be > 0");
  if (!(By_t >= 0.0)) throw DomainError("transition_at: By_t must be >= 0");
  const model::BandKernel K(beta_t);
  const double K_By = K.value(By_t);
  const double q_boundary = onset_ratio_boundary(K, By_t);
  auto q = [&](double h) { return onset_ratio(K, By_t, K_By, h); };

  // Offsets d = h̃ − B̃y: geometric near the boundary, then uniform.
  std::vector<double> d;
  for (int i = 0; i <= 40; ++i) d.push_back(1e-3 * std::pow(100.0, i / 40.0));
  const double d_max = 3.0 + By_t;
  for (int i = 1; i <= 160; ++i) d.push_back(0.1 + (d_max - 0.1) * i / 160.0);
  std::size_t best = 0;
  double q_best = -1.0;
  std::vector<double> qs(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    qs[i] = q(By_t + d[i]);
    if (qs[i] > q_best) {
      q_best = qs[i];
      best = i;
    }
  }
  TransitionRecord rec{beta_t, By_t, 0.0, Order::Second, 0.0, By_t};
  const bool interior = best > 0 && best + 1 < d.size() && q_best > q_boundary;
  if (!interior) {
    rec.g_star = 1.0 / std::sqrt(q_boundary);
    return rec;
  }
  const auto m = numerics::minimize_bracketed([&](double x) { return -q(By_t + x); }, d[best - 1], d[best + 1],
                                              {1e-12, 1e-10, 200});
  const double h1 = By_t + m.x;
  rec.g_star = 1.0 / std::sqrt(-m.value);
  rec.h_jump = h1;
  rec.jump = std::sqrt((h1 - By_t) * (h1 + By_t));
  rec.order = rec.jump > jump_threshold ? Order::First : Order::Second;
  return rec;
}

// ---------------------------------------------------------------------------
// Order switch
// ---------------------------------------------------------------------------

/// Coefficient of h̃⁴ in K_β(h̃) at B̃y = 0, from the expansion of ω_k about 1:
/// (π/64)(L₁ − L₂ + 2L₃ + L₄) with L(x) = ln(2cosh βx)/(2β) and Lₙ = L⁽ⁿ⁾(1).
inline double quartic_coefficient(double beta_t) {
  if (!(beta_t > 0.0)) throw DomainError("quartic_coefficient: beta_t must be > 0");
  if (std::isinf(beta_t)) return std::numbers::pi / 128.0;
  const double t = std::tanh(beta_t);
  const double ch = std::cosh(beta_t);
  const double s = std::isinf(ch) ? 0.0 : 1.0 / (ch * ch);
  const double b = beta_t;
  const double L1 = 0.5 * t;
  const double L2 = 0.5 * b * s;
  const double L3 = -b * b * s * t;
  const double L4 = -b * b * b * (s * s - 2.0 * s * t * t);
  return std::numbers::pi / 64.0 * (L1 - L2 + 2.0 * L3 + L4);
}

/// β̃ at which the B̃y = 0 transition turns first order: the quartic
/// coefficient of K_β, which enters ψ with a minus sign, turns positive.
inline double critical_beta() {
  const double lo = 0.5, hi = 5.0;
  if (!(quartic_coefficient(lo) < 0.0 && quartic_coefficient(hi) > 0.0)) {
    throw BracketFailure("critical_beta: quartic coefficient does not change sign on [0.5, 5]");
  }
  return numerics::find_root(quartic_coefficient, lo, hi, {1e-14, 1e-14, 200});
}

/// B̃y of the order switch at inverse temperature β̃ > β̃_c: the argmax of
/// R(h̃) = K′_β(h̃)/h̃, where h̃ K″ − K′ changes sign from + to −.
inline double order_switch_field(double beta_t) {
  const model::BandKernel K(beta_t);
  auto s = [&](double h) { return h * K.d2(h) - K.d1(h); };
  const double lo = 1e-3, hi = 3.0;
  const auto br = numerics::scan_sign_changes(s, lo, hi, 120);
  for (const auto& b : br) {
    if (s(b.lo) > 0.0) return b.lo == b.hi ? b.lo : numerics::find_root(s, b.lo, b.hi, {1e-13, 1e-12, 200});
  }
  throw BracketFailure("order_switch_field: no maximum of K'(h)/h in (0, 3]");
}

struct OrderBoundaryPoint {
  double By_t;
  double beta_t;
};

/// Order-switch curve from (0, β̃_c) to β̃ = beta_max on a geometric β̃ grid.
/// First order lies at smaller B̃y.
inline std::vector<OrderBoundaryPoint> order_boundary(int resolution, double beta_max = 50.0) {
  if (resolution < 16) throw DomainError("order_boundary: resolution must be >= 16");
  const double bc = critical_beta();
  if (!(beta_max > bc)) throw DomainError("order_boundary: beta_max must exceed the critical beta");
  std::vector<OrderBoundaryPoint> out{{0.0, bc}};
  // The switch field grows like sqrt(β̃ − β̃_c); sample (β̃ − β̃_c) geometrically.
  const double first = 1e-4 * (beta_max - bc);
  for (int i = 1; i < resolution; ++i) {
    const double beta = bc + first * std::pow((beta_max - bc) / first, static_cast<double>(i - 1) / (resolution - 2));
    out.push_back({order_switch_field(beta), beta});
  }
  return out;
}

struct Curvature {
  double f;
  double f_dd;
};

/// f = F/(NJ) at α̃ = 0 and its second derivative in B̃y; independent of g̃.
inline Curvature normal_branch_curvature(double By_t, double beta_t) {
  model::detail::require_thermal(By_t, beta_t);
  return {-model::kReducedToPerSite * model::thermal_kernel(By_t, beta_t),
          -model::kReducedToPerSite * model::thermal_kernel_d2(By_t, beta_t)};
}

}  // namespace cavity_ising::thermal
