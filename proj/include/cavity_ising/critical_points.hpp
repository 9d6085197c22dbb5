#pragma once

// Special points and phase boundaries of the zero-temperature diagram in the
// (B̃y, g̃) plane.
//
// Every two-equation system is reduced to one scalar root in h̃₀: stationarity
// ε_g′(h̃₀) = 0 fixes g̃² = 2h̃₀/I′(h̃₀), which is substituted into the remaining
// condition.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string_view>
#include <vector>

#include "cavity_ising/errors.hpp"
#include "cavity_ising/landscape.hpp"
#include "cavity_ising/model.hpp"
#include "cavity_ising/numerics.hpp"
#include "cavity_ising/special_functions.hpp"

namespace cavity_ising::critical {

enum class PointKind { A, UCEP, TCP, D };

inline std::string_view to_string(PointKind k) {
  switch (k) {
    case PointKind::A: return "A";
    case PointKind::UCEP: return "B";
    case PointKind::TCP: return "C";
    case PointKind::D: return "D";
  }
  return "?";
}

struct CriticalPoint {
  PointKind kind;
  double By_t;
  double g_t;
  double h0;  // field of the coexisting superradiant minimum; for C the merge field
  std::vector<double> residuals;
};

enum class Order { First, Second };

inline std::string_view to_string(Order o) { return o == Order::First ? "first" : "second"; }

enum class Segment { AB, BC, BD, CCprime };

inline std::string_view to_string(Segment s) {
  switch (s) {
    case Segment::AB: return "AB";
    case Segment::BC: return "BC";
    case Segment::BD: return "BD";
    case Segment::CCprime: return "CC'";
  }
  return "?";
}

struct BoundaryPoint {
  double By_t;
  double g_t;
};

struct PhaseBoundary {
  Order order;
  Segment segment;
  std::vector<BoundaryPoint> points;
};

inline numerics::Tolerance point_tolerance() { return {1e-15, 1e-15, 300}; }

/// g̃ at which h̃ is a stationary point of ε_g: g̃² = 2h̃/I′(h̃).
inline double stationary_coupling(double h) {
  if (!(h > 0.0)) throw DomainError("stationary_coupling: h must be > 0");
  return std::sqrt(2.0 * h / special::ising_kernel_d1(h));
}

namespace detail {

template <class F>
double unique_root(F&& f, double lo, double hi, int n, const char* what) {
  const auto brackets = numerics::scan_sign_changes(f, lo, hi, n);
  if (brackets.empty()) throw BracketFailure(std::string(what) + ": no sign change found");
  const auto& b = brackets.front();
  if (b.lo == b.hi) return b.lo;
  return numerics::find_root(f, b.lo, b.hi, point_tolerance());
}

}  // namespace detail

/// ε_g(h̃₀) = ε_g(0) with ε_g′(h̃₀) = 0: first-order transition at B̃y = 0.
inline CriticalPoint locate_point_A() {
  using special::ising_kernel;
  using special::ising_kernel_d1;
  auto f = [](double h) { return 0.5 * h * ising_kernel_d1(h) - ising_kernel(h) + std::numbers::pi / 2.0; };
  const double h0 = detail::unique_root(f, 1.0, 4.0, 60, "locate_point_A");
  const double g = stationary_coupling(h0);
  return {PointKind::A, 0.0, g, h0,
          {model::epsilon_g(h0, g) - model::epsilon_g(0.0, g), model::epsilon_g_d1(h0, g)}};
}

/// ε_g(h̃₀) = ε_g(1) with ε_g′(h̃₀) = 0 and h̃₀ > 1.
inline CriticalPoint locate_ucep() {
  using special::ising_kernel;
  using special::ising_kernel_d1;
  // h = 1 solves this trivially; the scan starts past it.
  auto f = [](double h) {
    const double d1 = ising_kernel_d1(h);
    return 0.5 * h * d1 - ising_kernel(h) - 0.5 * d1 / h + 2.0;
  };
  const double h0 = detail::unique_root(f, 1.01, 3.0, 60, "locate_ucep");
  const double g = stationary_coupling(h0);
  return {PointKind::UCEP, 1.0, g, h0,
          {model::epsilon_g(h0, g) - model::epsilon_g(1.0, g), model::epsilon_g_d1(h0, g)}};
}

/// ε_g′ = ε_g″ = 0, i.e. I″(h̃) = I′(h̃)/h̃; the point sits at B̃y = h̃.
inline CriticalPoint locate_tcp() {
  auto f = [](double h) { return special::ising_kernel_d2(h) - special::ising_kernel_d1(h) / h; };
  const double h = detail::unique_root(f, 1.0 + 1e-6, 3.0, 60, "locate_tcp");
  const double g = stationary_coupling(h);
  return {PointKind::TCP, h, g, h, {model::epsilon_g_d1(h, g), model::epsilon_g_d2(h, g)}};
}

/// Decoupled Ising critical point at vanishing coupling.
inline CriticalPoint locate_point_D() { return {PointKind::D, 1.0, 0.0, 1.0, {}}; }

/// Coupling at which α̃ = 0 loses local stability: ∂ε/∂(α̃²)|₀ = 0. At B̃y = 0
/// this is the limit sqrt(8/π).
inline double normal_instability_coupling(double By_t) {
  if (!(By_t >= 0.0)) throw DomainError("normal_instability_coupling: By_t must be >= 0");
  if (By_t == 0.0) return std::sqrt(8.0 / std::numbers::pi);
  return stationary_coupling(By_t);
}

/// Line CC′: g̃ = sqrt(2B̃y/I′(B̃y)) for B̃y at or above the tricritical field.
inline double second_order_boundary(double By_t, double By_tcp) {
  if (!(By_t >= By_tcp - 1e-9)) {
    throw DomainError("second_order_boundary: By_t lies below the tricritical point");
  }
  return stationary_coupling(By_t);
}

inline double second_order_boundary(double By_t) {
  return second_order_boundary(By_t, locate_tcp().By_t);
}

/// Field of the smooth superradiant minimum at coupling g̃ (independent of
/// B̃y at T = 0): the largest h̃ > 1 with I′(h̃)/h̃ = 2/g̃² and ε_g″ > 0.
inline double superradiant_field(double g_t) {
  model::require_coupling(g_t);
  const double inv_g2 = 1.0 / (g_t * g_t);
  auto dpsi = [&](double h) { return 2.0 * h * inv_g2 - special::ising_kernel_d1(h); };
  const double h_max = std::hypot(1.0, landscape::alpha_upper_bound(1.0, g_t));
  const auto pts = landscape::stationary_points(dpsi, 1.0, h_max, 400, point_tolerance());
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
    if (it->is_minimum && it->h > 1.0) return it->h;
  }
  throw BracketFailure("superradiant_field: no superradiant minimum at this coupling");
}

/// B̃y where the global minimum jumps from α̃ = 0 to the superradiant branch,
/// for g̃ between the tricritical and point-A couplings. The superradiant
/// minimum sits at fixed h̃_J; the jump happens where ψ(B̃y) = ψ(h̃_J) on the
/// rising part of ψ(h̃) = h̃²/g̃² − I(h̃) below its local maximum h̃_M.
inline double first_order_boundary(double g_t, double g_tcp, double g_A) {
  if (!(g_t > g_tcp && g_t < g_A)) {
    throw OutOfRange("first_order_boundary: g_t must lie strictly between g_C and g_A");
  }
  const double inv_g2 = 1.0 / (g_t * g_t);
  auto psi = [&](double h) { return h * h * inv_g2 - special::ising_kernel(h); };
  auto dpsi = [&](double h) { return 2.0 * h * inv_g2 - special::ising_kernel_d1(h); };
  const double h_J = superradiant_field(g_t);
  double h_M = -1.0;
  for (const auto& sp : landscape::stationary_points(dpsi, 1e-9, h_J, 400, point_tolerance())) {
    if (!sp.is_minimum) h_M = sp.h;
  }
  if (!(h_M > 0.0)) throw BracketFailure("first_order_boundary: no barrier below the superradiant minimum");
  const double psi_J = psi(h_J);
  auto delta = [&](double By) { return psi(By) - psi_J; };
  if (!(delta(0.0) < 0.0 && delta(h_M) > 0.0)) {
    throw BracketFailure("first_order_boundary: branch energies do not cross");
  }
  return numerics::find_root(delta, 0.0, h_M, point_tolerance());
}

inline double first_order_boundary(double g_t) {
  return first_order_boundary(g_t, locate_tcp().g_t, locate_point_A().g_t);
}

struct CriticalPointSet {
  CriticalPoint A, B, C, D;
};

inline CriticalPointSet locate_all() {
  return {locate_point_A(), locate_ucep(), locate_tcp(), locate_point_D()};
}

/// Boundaries AB and BC (first order, parameterized by g̃), BD (second order,
/// vertical) and CC′ (second order, parameterized by B̃y up to By_max).
inline std::vector<PhaseBoundary> assemble_phase_diagram(int resolution, double By_max = 3.0) {
  if (resolution < 16) throw DomainError("assemble_phase_diagram: resolution must be >= 16");
  const auto pts = locate_all();
  if (!(By_max > pts.C.By_t)) throw DomainError("assemble_phase_diagram: By_max below the tricritical field");
  const int n = resolution;
  std::vector<PhaseBoundary> out;

  PhaseBoundary ab{Order::First, Segment::AB, {}};
  ab.points.push_back({0.0, pts.A.g_t});
  for (int i = 1; i < n - 1; ++i) {
    const double g = pts.A.g_t + (pts.B.g_t - pts.A.g_t) * i / (n - 1);
    ab.points.push_back({first_order_boundary(g, pts.C.g_t, pts.A.g_t), g});
  }
  ab.points.push_back({1.0, pts.B.g_t});
  out.push_back(std::move(ab));

  PhaseBoundary bc{Order::First, Segment::BC, {}};
  bc.points.push_back({1.0, pts.B.g_t});
  for (int i = 1; i < n - 1; ++i) {
    const double g = pts.B.g_t + (pts.C.g_t - pts.B.g_t) * i / (n - 1);
    bc.points.push_back({first_order_boundary(g, pts.C.g_t, pts.A.g_t), g});
  }
  bc.points.push_back({pts.C.By_t, pts.C.g_t});
  out.push_back(std::move(bc));

  PhaseBoundary bd{Order::Second, Segment::BD, {}};
  for (int i = 0; i < n; ++i) bd.points.push_back({1.0, pts.B.g_t * i / (n - 1)});
  out.push_back(std::move(bd));

  PhaseBoundary cc{Order::Second, Segment::CCprime, {}};
  for (int i = 0; i < n; ++i) {
    const double By = pts.C.By_t + (By_max - pts.C.By_t) * i / (n - 1);
    cc.points.push_back({By, i == 0 ? pts.C.g_t : stationary_coupling(By)});
  }
  out.push_back(std::move(cc));
  return out;
}

// ---------------------------------------------------------------------------
// Series fits of the landscape in u = α̃²
// ---------------------------------------------------------------------------

struct SeriesFit {
  std::vector<double> coefficients;  // in the order of the supplied basis
  double max_abs_residual;
};

/// Least-squares fit of y(x) onto basis functions evaluated at x.
template <class Basis>
SeriesFit fit_basis(const std::vector<double>& x, const std::vector<double>& y, int n_basis, Basis&& basis) {
  if (x.size() != y.size() || static_cast<int>(x.size()) < n_basis) {
    throw DomainError("fit_basis: need at least as many samples as basis functions");
  }
  const auto m = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd A(m, n_basis);
  Eigen::VectorXd b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (int j = 0; j < n_basis; ++j) A(i, j) = basis(j, x[static_cast<std::size_t>(i)]);
    b(i) = y[static_cast<std::size_t>(i)];
  }
  // Column scaling keeps the normal problem well conditioned.
  Eigen::VectorXd scale = A.colwise().norm().transpose();
  for (int j = 0; j < n_basis; ++j) A.col(j) /= scale(j);
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
  SeriesFit fit;
  fit.max_abs_residual = (A * c - b).cwiseAbs().maxCoeff();
  for (int j = 0; j < n_basis; ++j) fit.coefficients.push_back(c(j) / scale(j));
  return fit;
}

struct TcpExpansion {
  double constant;  // ε_g at the tricritical point
  double b2, b4, b6, b8;
  double max_abs_residual;
};

/// ε_g(sqrt(B̃y² + α̃²)) at the tricritical point fitted as a polynomial in
/// u = α̃² through u⁶ on α̃ ∈ [alpha_lo, alpha_hi].
inline TcpExpansion tcp_expansion(double alpha_lo = 0.05, double alpha_hi = 0.3, int samples = 101) {
  const auto c = locate_tcp();
  const double e0 = model::epsilon_g(c.By_t, c.g_t);
  std::vector<double> u, y;
  for (int i = 0; i < samples; ++i) {
    const double a = alpha_lo + (alpha_hi - alpha_lo) * i / (samples - 1);
    u.push_back(a * a);
    y.push_back(model::epsilon_g(std::hypot(c.By_t, a), c.g_t) - e0);
  }
  const auto fit = fit_basis(u, y, 6, [](int j, double x) { return std::pow(x, j + 1); });
  return {e0, fit.coefficients[0], fit.coefficients[1], fit.coefficients[2], fit.coefficients[3],
          fit.max_abs_residual};
}

struct UnitFieldExpansion {
  double quadratic;      // coefficient of α̃²
  double quartic_log;    // coefficient of α̃⁴ ln α̃²
  double quartic;        // coefficient of α̃⁴
  double max_abs_residual;
};

/// ε(α̃) − ε(0) at B̃y = 1 fitted to u, u² ln u, u², u³ ln u, u³, u⁴ ln u, u⁴.
inline UnitFieldExpansion unit_field_expansion(double g_t, double alpha_lo = 1e-3, double alpha_hi = 0.05,
                                               int samples = 121) {
  model::require_coupling(g_t);
  const double e0 = model::landscape_energy(0.0, 1.0, g_t);
  std::vector<double> u, y;
  for (int i = 0; i < samples; ++i) {
    // Geometric spacing resolves the logarithm.
    const double a = alpha_lo * std::pow(alpha_hi / alpha_lo, static_cast<double>(i) / (samples - 1));
    u.push_back(a * a);
    y.push_back(model::landscape_energy(a, 1.0, g_t) - e0);
  }
  auto basis = [](int j, double x) {
    const int power = 1 + (j + 1) / 2;
    const bool log_term = (j % 2) == 1;
    return std::pow(x, power) * (log_term ? std::log(x) : 1.0);
  };
  const auto fit = fit_basis(u, y, 7, basis);
  return {fit.coefficients[0], fit.coefficients[1], fit.coefficients[2], fit.max_abs_residual};
}

}  // namespace cavity_ising::critical
