#pragma once

// Global minimization of the free-energy landscape over the superradiant
// amplitude α̃ ≥ 0 and the resulting phase labels.
//
// Because the landscape depends on α̃ only through h̃ = sqrt(B̃y² + α̃²), it is
// minimized over h̃ ∈ [B̃y, h̃_max] as ψ(h̃) = h̃²/g̃² − K(h̃) (ψ and ε differ by
// B̃y²/g̃²). At T = 0 the kernel is nonanalytic at h̃ = 1, so [B̃y, 1] and
// [1, h̃_max] are searched separately and h̃ = 1 is always a candidate.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cavity_ising/errors.hpp"
#include "cavity_ising/model.hpp"
#include "cavity_ising/numerics.hpp"

namespace cavity_ising::landscape {

using model::ReducedParams;

enum class Branch { Origin, Kink, SmoothInterior };

inline std::string_view to_string(Branch b) {
  switch (b) {
    case Branch::Origin: return "origin";
    case Branch::Kink: return "kink";
    case Branch::SmoothInterior: return "stationary";
  }
  return "?";
}

struct Candidate {
  Branch branch;
  double alpha_t;
  double h_t;
  double energy;
};

struct LandscapeResult {
  double alpha_star = 0.0;
  double energy = 0.0;
  std::optional<double> kink_alpha;
  bool degenerate = false;
  Branch branch = Branch::Origin;
  double h_star = 0.0;
  std::vector<Candidate> candidates;  // every local-minimum candidate examined
};

struct LandscapeOptions {
  double degeneracy_tol = 1e-10;
  int scan_points = 400;  // per analytic branch
  numerics::Tolerance root_tol{1e-14, 1e-14, 200};
  numerics::Tolerance quad_tol = model::thermal_tolerance();
};

/// Upper end of the search interval in α̃; ε is increasing beyond it.
inline double alpha_upper_bound(double By_t, double g_t) { return By_t + g_t * g_t + 2.0; }

struct StationaryPoint {
  double h;
  bool is_minimum;
};

/// Zeros of dpsi on [lo, hi] located by a uniform scan and refined by Brent.
template <class DPsi>
std::vector<StationaryPoint> stationary_points(DPsi&& dpsi, double lo, double hi, int n,
                                               const numerics::Tolerance& tol) {
  std::vector<StationaryPoint> out;
  for (const auto& br : numerics::scan_sign_changes(dpsi, lo, hi, n)) {
    double h = br.lo;
    if (br.hi > br.lo) h = numerics::find_root(dpsi, br.lo, br.hi, tol);
    // Classify by the derivative sign on either side.
    const double step = std::max(1e-9, 1e-7 * std::fabs(h));
    const double left = dpsi(std::max(lo, h - step));
    const double right = dpsi(std::min(hi, h + step));
    out.push_back({h, left <= 0.0 && right >= 0.0});
  }
  return out;
}

inline LandscapeResult minimize_landscape(const ReducedParams& p, const LandscapeOptions& opt = {}) {
  p.validate();
  const double By = p.By_t;
  const double g = p.g_t;
  const model::BandKernel kernel(p.beta_t, opt.quad_tol);
  LandscapeResult result;
  if (p.zero_temperature() && By < 1.0) result.kink_alpha = std::sqrt(1.0 - By * By);

  if (g == 0.0) {
    // Cavity decoupled: no α̃ > 0 can lower the energy.
    result.energy = -kernel.value(By);
    result.h_star = By;
    result.candidates.push_back({Branch::Origin, 0.0, By, result.energy});
    return result;
  }

  const double inv_g2 = 1.0 / (g * g);
  const double offset = By * By * inv_g2;
  auto psi = [&](double h) { return h * h * inv_g2 - kernel.value(h); };
  auto dpsi = [&](double h) { return 2.0 * h * inv_g2 - kernel.d1(h); };
  auto make = [&](Branch b, double h) {
    const double alpha = std::sqrt(std::max(0.0, h * h - By * By));
    return Candidate{b, alpha, h, psi(h) - offset};
  };

  std::vector<Candidate> cands;
  cands.push_back({Branch::Origin, 0.0, By, -kernel.value(By)});
  if (result.kink_alpha) cands.push_back(make(Branch::Kink, 1.0));

  const double h_max = std::hypot(By, alpha_upper_bound(By, g));
  std::vector<std::pair<double, double>> segments;
  if (p.zero_temperature() && By < 1.0) {
    segments = {{By, 1.0}, {1.0, h_max}};
  } else {
    segments = {{By, h_max}};
  }
  for (const auto& [lo, hi] : segments) {
    // ψ′(0) = 0 exactly; starting just above it keeps a minimum near the
    // origin from hiding inside the first scan cell.
    const double scan_lo = lo == 0.0 ? 1e-9 * hi : lo;
    for (const auto& sp : stationary_points(dpsi, scan_lo, hi, opt.scan_points, opt.root_tol)) {
      if (!sp.is_minimum || sp.h <= By) continue;
      cands.push_back(make(Branch::SmoothInterior, sp.h));
    }
  }

  auto best = std::min_element(cands.begin(), cands.end(),
                               [](const Candidate& a, const Candidate& b) { return a.energy < b.energy; });
  Candidate chosen = *best;
  for (const auto& c : cands) {
    if (std::fabs(c.energy - best->energy) <= opt.degeneracy_tol &&
        std::fabs(c.alpha_t - best->alpha_t) > 1e-6) {
      result.degenerate = true;
      if (c.alpha_t > chosen.alpha_t) chosen = c;
    }
  }
  result.alpha_star = chosen.alpha_t;
  result.energy = chosen.energy;
  result.branch = chosen.branch;
  result.h_star = chosen.h_t;
  result.candidates = std::move(cands);
  return result;
}

// ---------------------------------------------------------------------------
// Phases
// ---------------------------------------------------------------------------

enum class PhaseLabel { PSR, PN, AFN, NormalFiniteT, Superradiant };

inline std::string_view to_string(PhaseLabel l) {
  switch (l) {
    case PhaseLabel::PSR: return "PSR";
    case PhaseLabel::PN: return "PN";
    case PhaseLabel::AFN: return "AFN";
    case PhaseLabel::NormalFiniteT: return "Normal";
    case PhaseLabel::Superradiant: return "Superradiant";
  }
  return "?";
}

struct Phase {
  PhaseLabel label;
  double alpha_t;
  double m_s;
  double h_t;
  // Set when a T = 0 superradiant minimum sits at h̃ < 1; m_s is then the
  // chain's ordered-phase value rather than zero.
  bool superradiant_below_unit_field = false;
};

/// Staggered magnetization of the transverse-field Ising ground state.
inline double staggered_magnetization(double h_t) {
  return h_t < 1.0 ? std::pow(1.0 - h_t * h_t, 0.125) : 0.0;
}

inline Phase phase_from(const ReducedParams& p, const LandscapeResult& r) {
  Phase ph{};
  ph.alpha_t = r.alpha_star;
  ph.h_t = r.h_star;
  const bool superradiant = r.alpha_star > 0.0;
  if (!p.zero_temperature()) {
    ph.label = superradiant ? PhaseLabel::Superradiant : PhaseLabel::NormalFiniteT;
    ph.m_s = 0.0;
    return ph;
  }
  ph.m_s = staggered_magnetization(r.h_star);
  if (superradiant) {
    ph.label = PhaseLabel::PSR;
    ph.superradiant_below_unit_field = r.h_star < 1.0;
  } else {
    ph.label = ph.m_s > 0.0 ? PhaseLabel::AFN : PhaseLabel::PN;
  }
  return ph;
}

inline Phase classify_phase(const ReducedParams& p, const LandscapeOptions& opt = {}) {
  return phase_from(p, minimize_landscape(p, opt));
}

struct SweepPoint {
  double By_t;
  double alpha_t;
  double m_s;
  double h_t;
  PhaseLabel label;
};

inline SweepPoint sweep_point(double g_t, double By_t, double beta_t,
                              const LandscapeOptions& opt = {}) {
  const ReducedParams p{g_t, By_t, beta_t};
  const Phase ph = classify_phase(p, opt);
  return {By_t, ph.alpha_t, ph.m_s, ph.h_t, ph.label};
}

/// Order parameters along a B̃y grid at fixed coupling, in grid order.
inline std::vector<SweepPoint> order_parameter_sweep(double g_t, const std::vector<double>& By_grid,
                                                     double beta_t = model::kInfinity,
                                                     const LandscapeOptions& opt = {}) {
  if (!std::is_sorted(By_grid.begin(), By_grid.end())) {
    throw DomainError("order_parameter_sweep: grid must be ordered");
  }
  std::vector<SweepPoint> out;
  out.reserve(By_grid.size());
  for (double By : By_grid) out.push_back(sweep_point(g_t, By, beta_t, opt));
  return out;
}

/// Minimized energy ε_min(B̃y) at fixed coupling and temperature.
inline double minimized_energy(double g_t, double By_t, double beta_t,
                               const LandscapeOptions& opt = {}) {
  return minimize_landscape({g_t, By_t, beta_t}, opt).energy;
}

/// χ⊥ = −∂²ε_min/∂B̃y² by Richardson-extrapolated central differences. At
/// T = 0 the outer stencil points stay on the side of B̃y = 1 of the centre
/// and in the same phase, so neither the kink nor a jump is differenced.
inline numerics::DerivativeEstimate transverse_susceptibility_estimate(
    double g_t, double By_t, double beta_t = model::kInfinity, const LandscapeOptions& opt = {}) {
  const auto center = minimize_landscape({g_t, By_t, beta_t}, opt);
  const bool zero_t = std::isinf(beta_t);
  double step = 1e-3;
  if (zero_t) {
    const double dist = std::fabs(By_t - 1.0);
    if (center.alpha_star == 0.0 && dist < 1e-9) {
      throw SingularPoint("transverse_susceptibility: logarithmic divergence at By_t = 1");
    }
    if (dist > 0.0) step = std::min(step, 0.5 * dist);
  }
  if (By_t - step < 0.0) step = std::max(By_t, 1e-6);
  auto same_phase = [&](double By) {
    const auto r = minimize_landscape({g_t, By, beta_t}, opt);
    return (r.alpha_star > 0.0) == (center.alpha_star > 0.0);
  };
  while (!(same_phase(By_t - step) && same_phase(By_t + step))) {
    step *= 0.25;
    if (step < 1e-7) throw SingularPoint("transverse_susceptibility: point lies on a phase boundary");
  }
  auto e = [&](double By) { return minimized_energy(g_t, std::fabs(By), beta_t, opt); };
  auto d = numerics::second_derivative(e, By_t, step);
  return {-d.value, d.error};
}

inline double transverse_susceptibility(double g_t, double By_t, double beta_t = model::kInfinity,
                                        const LandscapeOptions& opt = {}) {
  return transverse_susceptibility_estimate(g_t, By_t, beta_t, opt).value;
}

}  // namespace cavity_ising::landscape
