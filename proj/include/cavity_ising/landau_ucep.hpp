#pragma once

// Minimal free energy with a unilateral critical endpoint,
//   f(α̃) = c₁v + v² ln|v|,   v = α̃² + c₂,
// minimized over u = α̃² ≥ 0. In v the stationarity condition is
// c₁ + 2v ln|v| + v = 0 and f″(v) = 2 ln|v| + 3; v = 0 is the nonanalytic point.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string_view>
#include <utility>
#include <vector>

#include "cavity_ising/errors.hpp"
#include "cavity_ising/landscape.hpp"
#include "cavity_ising/numerics.hpp"

namespace cavity_ising::landau {

struct LandauParams {
  double c1;
  double c2;
};

/// f as a function of v; v² ln|v| is extended by 0 at v = 0.
inline double f_of_v(double v, double c1) {
  return v == 0.0 ? 0.0 : c1 * v + v * v * std::log(std::fabs(v));
}

inline double df_dv(double v, double c1) {
  return v == 0.0 ? c1 : c1 + 2.0 * v * std::log(std::fabs(v)) + v;
}

inline double f_landau(double alpha_t, const LandauParams& p) {
  return f_of_v(alpha_t * alpha_t + p.c2, p.c1);
}

namespace detail {

inline const double kSplit = std::exp(-1.5);  // minimum of x(2 ln x + 1)

inline double branch_g(double x) { return x * (2.0 * std::log(x) + 1.0); }

// Positive solutions of x(2 ln x + 1) = t, one per monotone branch.
inline std::vector<double> solve_branches(double t) {
  std::vector<double> out;
  const double g_min = branch_g(kSplit);
  if (t < g_min) return out;
  const numerics::Tolerance tol{1e-16, 1e-15, 300};
  auto f = [t](double x) { return branch_g(x) - t; };
  if (t < 0.0) {
    // Decreasing branch on (0, e^{-3/2}]; g → 0⁻ as x → 0⁺.
    double lo = kSplit;
    while (f(lo) < 0.0 && lo > 1e-300) lo *= 0.5;
    if (f(lo) >= 0.0) out.push_back(numerics::find_root(f, lo, kSplit, tol));
  }
  double hi = 2.0 * kSplit;
  while (f(hi) < 0.0) hi *= 2.0;
  out.push_back(t == g_min ? kSplit : numerics::find_root(f, kSplit, hi, tol));
  return out;
}

}  // namespace detail

/// Stationary values of v (any sign) with f″(v) > 0.
inline std::vector<double> smooth_minima_v(double c1) {
  std::vector<double> out;
  // v > 0: x(2 ln x + 1) = −c₁.   v < 0 (v = −w): w(2 ln w + 1) = c₁.
  for (double v : detail::solve_branches(-c1)) {
    if (2.0 * std::log(v) + 3.0 > 0.0) out.push_back(v);
  }
  for (double w : detail::solve_branches(c1)) {
    if (2.0 * std::log(w) + 3.0 > 0.0) out.push_back(-w);
  }
  return out;
}

/// Global minimum over u = α̃² ≥ 0. In the returned result h_star holds v*.
inline landscape::LandscapeResult minimize_landau(const LandauParams& p, double degeneracy_tol = 1e-10) {
  using landscape::Branch;
  using landscape::Candidate;
  std::vector<Candidate> cands;
  cands.push_back({Branch::Origin, 0.0, p.c2, f_of_v(p.c2, p.c1)});
  landscape::LandscapeResult r;
  if (p.c2 < 0.0) {
    r.kink_alpha = std::sqrt(-p.c2);
    cands.push_back({Branch::Kink, *r.kink_alpha, 0.0, 0.0});
  }
  for (double v : smooth_minima_v(p.c1)) {
    if (v > p.c2) cands.push_back({Branch::SmoothInterior, std::sqrt(v - p.c2), v, f_of_v(v, p.c1)});
  }
  auto best = *std::min_element(cands.begin(), cands.end(),
                                [](const Candidate& a, const Candidate& b) { return a.energy < b.energy; });
  Candidate chosen = best;
  for (const auto& c : cands) {
    if (std::fabs(c.energy - best.energy) <= degeneracy_tol && std::fabs(c.alpha_t - best.alpha_t) > 1e-6) {
      r.degenerate = true;
      if (c.alpha_t > chosen.alpha_t) chosen = c;
    }
  }
  r.alpha_star = chosen.alpha_t;
  r.energy = chosen.energy;
  r.branch = chosen.branch;
  r.h_star = chosen.h_t;
  r.candidates = std::move(cands);
  return r;
}

struct LandauCriticalPoints {
  LandauParams ucep;
  LandauParams tcp;
};

inline LandauCriticalPoints landau_critical_points() {
  const double e32 = std::exp(-1.5);
  return {{1.0 / std::numbers::e, 0.0}, {2.0 * e32, e32}};
}

// ---------------------------------------------------------------------------
// Mapping to the microscopic model near B: c₂ = 2δB̃y, c₁ = 8(2 − g̃²)/g̃²
// ---------------------------------------------------------------------------

struct ModelPoint {
  double By_t;
  double g_t;
};

inline ModelPoint map_to_model(const LandauParams& p) {
  if (!(p.c1 > -8.0)) throw DomainError("map_to_model: c1 must exceed -8");
  return {1.0 + 0.5 * p.c2, 4.0 / std::sqrt(p.c1 + 8.0)};
}

inline LandauParams map_from_model(double By_t, double g_t) {
  if (!(g_t > 0.0)) throw DomainError("map_from_model: g_t must be > 0");
  return {16.0 / (g_t * g_t) - 8.0, 2.0 * (By_t - 1.0)};
}

// ---------------------------------------------------------------------------
// Susceptibility and phases
// ---------------------------------------------------------------------------

/// χ = ∂²f/∂v² = 2 ln|v| + 3 at v = α̃² + c₂, with the field deviation
/// measured by v.
inline double landau_susceptibility(const LandauParams& p, double alpha_t) {
  const double v = alpha_t * alpha_t + p.c2;
  if (v == 0.0) throw SingularPoint("landau_susceptibility: logarithmic divergence at v = 0");
  return 2.0 * std::log(std::fabs(v)) + 3.0;
}

enum class LandauPhase { Ordered, Normal, Superradiant };  // analogs of AFN, PN, PSR

inline std::string_view to_string(LandauPhase p) {
  switch (p) {
    case LandauPhase::Ordered: return "AFN";
    case LandauPhase::Normal: return "PN";
    case LandauPhase::Superradiant: return "PSR";
  }
  return "?";
}

inline LandauPhase landau_phase(const LandauParams& p, const landscape::LandscapeResult& r) {
  if (r.alpha_star > 0.0) return LandauPhase::Superradiant;
  return p.c2 < 0.0 ? LandauPhase::Ordered : LandauPhase::Normal;
}

inline LandauPhase landau_phase(const LandauParams& p) { return landau_phase(p, minimize_landau(p)); }

enum class TransitionOrder { First, Continuous };

inline std::string_view to_string(TransitionOrder o) {
  return o == TransitionOrder::First ? "first" : "continuous";
}

struct LandauTransition {
  double c1;
  double c2;
  TransitionOrder order;
  double jump;  // |Δα̃| across the transition
  LandauPhase from;
  LandauPhase to;
};

/// Transitions met along c₂ ∈ [c2_lo, c2_hi] (ascending) at fixed c₁, located
/// by a uniform scan and bisection to width bisect_tol.
inline std::vector<LandauTransition> landau_sweep(double c1, double c2_lo, double c2_hi, int n,
                                                  double jump_threshold = 1e-3, double bisect_tol = 1e-12) {
  if (n < 2 || !(c2_hi > c2_lo)) throw DomainError("landau_sweep: need n >= 2 and c2_hi > c2_lo");
  std::vector<LandauTransition> out;
  auto phase_at = [c1](double c2) { return landau_phase({c1, c2}); };
  double x0 = c2_lo;
  LandauPhase p0 = phase_at(x0);
  for (int i = 1; i < n; ++i) {
    const double x1 = c2_lo + (c2_hi - c2_lo) * i / (n - 1);
    const LandauPhase p1 = phase_at(x1);
    if (p1 != p0) {
      double a = x0, b = x1;
      while (b - a > bisect_tol) {
        const double mid = 0.5 * (a + b);
        if (phase_at(mid) == p0) a = mid;
        else b = mid;
      }
      const double jump =
          std::fabs(minimize_landau({c1, b}).alpha_star - minimize_landau({c1, a}).alpha_star);
      const auto order = jump > jump_threshold ? TransitionOrder::First : TransitionOrder::Continuous;
      out.push_back({c1, 0.5 * (a + b), order, jump, p0, p1});
    }
    x0 = x1;
    p0 = p1;
  }
  return out;
}

struct LandauDiagram {
  std::vector<LandauTransition> transitions;
  LandauCriticalPoints critical;
};

/// Transition points on a c₁ grid, each row swept in c₂.
inline LandauDiagram landau_phase_diagram(std::pair<double, double> c1_range, std::pair<double, double> c2_range,
                                          int resolution) {
  if (resolution < 2) throw DomainError("landau_phase_diagram: resolution must be >= 2");
  const auto crit = landau_critical_points();
  for (const auto& cp : {crit.ucep, crit.tcp}) {
    if (cp.c1 < c1_range.first || cp.c1 > c1_range.second || cp.c2 < c2_range.first || cp.c2 > c2_range.second) {
      throw DomainError("landau_phase_diagram: ranges must contain both critical points");
    }
  }
  LandauDiagram d{{}, crit};
  for (int i = 0; i < resolution; ++i) {
    const double c1 = c1_range.first + (c1_range.second - c1_range.first) * i / (resolution - 1);
    auto row = landau_sweep(c1, c2_range.first, c2_range.second, 4 * resolution);
    d.transitions.insert(d.transitions.end(), row.begin(), row.end());
  }
  return d;
}

}  // namespace cavity_ising::landau
