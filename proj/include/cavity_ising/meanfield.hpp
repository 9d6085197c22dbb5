#pragma once

// Mean-field energy with a staggered Ising order parameter,
//   ε_MF = γ̃α̃² + m_s² − sqrt(α̃² + 4m_s² + B̃y²).
// Interior stationarity in α̃ needs sqrt(...) = 1/(2γ̃) and in m_s needs
// sqrt(...) = 2, so the sectors α̃ = 0 and m_s = 0 carry every isolated
// minimum; both conditions hold together only on the line γ̃ = 1/4.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string_view>
#include <vector>

#include "cavity_ising/errors.hpp"
#include "cavity_ising/landscape.hpp"

namespace cavity_ising::meanfield {

using landscape::PhaseLabel;

struct MeanFieldPoint {
  double alpha_t;
  double m_s;
  double gamma_t;
  double By_t;

  void validate() const {
    if (!(alpha_t >= 0.0) || !(m_s >= 0.0) || !(By_t >= 0.0)) {
      throw DomainError("MeanFieldPoint: alpha_t, m_s and By_t must be >= 0");
    }
    if (!(gamma_t > 0.0)) throw DomainError("MeanFieldPoint: gamma_t must be > 0");
  }
};

/// Cavity coefficient implied by the reduced coupling: γ̃ = 2/(πg̃²).
inline double gamma_from_coupling(double g_t) {
  if (!(g_t > 0.0)) throw DomainError("gamma_from_coupling: g_t must be > 0");
  return 2.0 / (std::numbers::pi * g_t * g_t);
}

inline double coupling_from_gamma(double gamma_t) {
  if (!(gamma_t > 0.0)) throw DomainError("coupling_from_gamma: gamma_t must be > 0");
  return std::sqrt(2.0 / (std::numbers::pi * gamma_t));
}

inline double epsilon_mf(double alpha_t, double m_s, double gamma_t, double By_t) {
  return gamma_t * alpha_t * alpha_t + m_s * m_s -
         std::sqrt(alpha_t * alpha_t + 4.0 * m_s * m_s + By_t * By_t);
}

inline double epsilon_mf(const MeanFieldPoint& p) {
  p.validate();
  return epsilon_mf(p.alpha_t, p.m_s, p.gamma_t, p.By_t);
}

struct MeanFieldResult {
  MeanFieldPoint point;
  double energy;
  PhaseLabel label;
};

/// Global minimum over the sector minimizers:
///   PN  (0, 0)                          energy −B̃y
///   AFN (0, sqrt(1 − B̃y²/4)), B̃y < 2     energy −1 − B̃y²/4
///   PSR (sqrt(1/(4γ̃²) − B̃y²), 0)        energy −1/(4γ̃) − γ̃B̃y²
/// Ties go to the superradiant sector.
inline MeanFieldResult minimize_mf(double gamma_t, double By_t) {
  if (!(gamma_t > 0.0)) throw DomainError("minimize_mf: gamma_t must be > 0");
  if (!(By_t >= 0.0)) throw DomainError("minimize_mf: By_t must be >= 0");
  MeanFieldResult best{{0.0, 0.0, gamma_t, By_t}, -By_t, PhaseLabel::PN};
  constexpr double kTie = 1e-14;
  if (By_t < 2.0) {
    const double m = std::sqrt(1.0 - 0.25 * By_t * By_t);
    const double e = epsilon_mf(0.0, m, gamma_t, By_t);
    if (e < best.energy - kTie) best = {{0.0, m, gamma_t, By_t}, e, PhaseLabel::AFN};
  }
  const double a2 = 0.25 / (gamma_t * gamma_t) - By_t * By_t;
  if (a2 > 0.0) {
    const double a = std::sqrt(a2);
    const double e = epsilon_mf(a, 0.0, gamma_t, By_t);
    if (e <= best.energy + kTie) best = {{a, 0.0, gamma_t, By_t}, e, PhaseLabel::PSR};
  }
  return best;
}

inline double mf_min_energy(double gamma_t, double By_t) { return minimize_mf(gamma_t, By_t).energy; }

// ---------------------------------------------------------------------------
// Phase diagram in the (B̃y, γ̃) plane
// ---------------------------------------------------------------------------

struct MfBoundaryPoint {
  double By_t;
  double gamma_t;
  double g_t;  // coupling_from_gamma(gamma_t)
  PhaseLabel from;
  PhaseLabel to;
  double jump_alpha;
  double jump_m;
  bool first_order;
};

struct MfJunction {
  double By_t;
  double gamma_t;
};

struct MfDiagram {
  std::vector<MfBoundaryPoint> boundary;
  std::vector<MfJunction> junctions;  // grid cells where all three phases meet
  double By_max;
  double gamma_lo;
  double gamma_hi;
};

struct MfDiagramOptions {
  double By_max = 4.0;
  double gamma_lo = 0.05;
  double gamma_hi = 0.6;
  double jump_threshold = 1e-3;
};

namespace detail {

// Bisects the label change between two grid points along a segment.
inline MfBoundaryPoint locate_edge(double By0, double g0, double By1, double g1, double jump_threshold) {
  const auto p0 = minimize_mf(g0, By0);
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    const auto r = minimize_mf(g0 + (g1 - g0) * mid, By0 + (By1 - By0) * mid);
    if (r.label == p0.label) lo = mid;
    else hi = mid;
  }
  const auto a = minimize_mf(g0 + (g1 - g0) * lo, By0 + (By1 - By0) * lo);
  const auto b = minimize_mf(g0 + (g1 - g0) * hi, By0 + (By1 - By0) * hi);
  const double t = 0.5 * (lo + hi);
  const double By = By0 + (By1 - By0) * t;
  const double gamma = g0 + (g1 - g0) * t;
  const double ja = std::fabs(a.point.alpha_t - b.point.alpha_t);
  const double jm = std::fabs(a.point.m_s - b.point.m_s);
  return {By, gamma, coupling_from_gamma(gamma), a.label, b.label, ja, jm,
          std::max(ja, jm) > jump_threshold};
}

}  // namespace detail

/// Boundary points from a resolution × resolution grid, refined by bisection
/// along every grid edge whose endpoints carry different labels.
inline MfDiagram mf_phase_diagram(int resolution, const MfDiagramOptions& opt = {}) {
  if (resolution < 4) throw DomainError("mf_phase_diagram: resolution must be >= 4");
  const int n = resolution;
  auto By_at = [&](int i) { return opt.By_max * i / (n - 1); };
  auto gamma_at = [&](int j) { return opt.gamma_lo + (opt.gamma_hi - opt.gamma_lo) * j / (n - 1); };
  std::vector<PhaseLabel> labels(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) labels[static_cast<std::size_t>(i * n + j)] = minimize_mf(gamma_at(j), By_at(i)).label;
  }
  auto label = [&](int i, int j) { return labels[static_cast<std::size_t>(i * n + j)]; };
  MfDiagram d{{}, {}, opt.By_max, opt.gamma_lo, opt.gamma_hi};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i + 1 < n && label(i, j) != label(i + 1, j)) {
        d.boundary.push_back(detail::locate_edge(By_at(i), gamma_at(j), By_at(i + 1), gamma_at(j), opt.jump_threshold));
      }
      if (j + 1 < n && label(i, j) != label(i, j + 1)) {
        d.boundary.push_back(detail::locate_edge(By_at(i), gamma_at(j), By_at(i), gamma_at(j + 1), opt.jump_threshold));
      }
      if (i + 1 < n && j + 1 < n) {
        const PhaseLabel c[4] = {label(i, j), label(i + 1, j), label(i, j + 1), label(i + 1, j + 1)};
        bool has_pn = false, has_afn = false, has_psr = false;
        for (auto l : c) {
          has_pn |= l == PhaseLabel::PN;
          has_afn |= l == PhaseLabel::AFN;
          has_psr |= l == PhaseLabel::PSR;
        }
        if (has_pn && has_afn && has_psr) {
          d.junctions.push_back({0.5 * (By_at(i) + By_at(i + 1)), 0.5 * (gamma_at(j) + gamma_at(j + 1))});
        }
      }
    }
  }
  return d;
}

/// Exact junction of the three mean-field lines γ̃ = 1/4, B̃y = 2, γ̃ = 1/(2B̃y).
inline MfJunction mf_junction_exact() { return {2.0, 0.25}; }

}  // namespace cavity_ising::meanfield
