#pragma once

// Deterministic scalar numerics: bracketed root finding, adaptive
// Gauss-Kronrod quadrature, Richardson-extrapolated second derivatives and
// bracketed minimization. Everything here is pure and reentrant.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "cavity_ising/errors.hpp"

namespace cavity_ising::numerics {

struct Tolerance {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_iter = 200;

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol >= 0.0) || max_iter < 1) {
      throw DomainError("Tolerance: require abs_tol > 0, rel_tol >= 0, max_iter >= 1");
    }
  }
};

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

// ---------------------------------------------------------------------------
// Root finding
// ---------------------------------------------------------------------------

/// Brent's bracketing root finder (inverse quadratic interpolation, secant and
/// bisection). Requires f(lo) and f(hi) of opposite sign (or one of them zero).
template <class F>
double find_root(F&& f, double lo, double hi, const Tolerance& tol = {}) {
  tol.validate();
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (!std::isfinite(fa) || !std::isfinite(fb)) {
    throw DomainError("find_root: non-finite function value at bracket end");
  }
  if ((fa > 0.0) == (fb > 0.0)) {
    throw NoSignChange("find_root: f(lo) and f(hi) have the same sign");
  }
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 0; iter < tol.max_iter; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 =
        2.0 * kEps * std::fabs(b) + 0.5 * std::max(tol.abs_tol, tol.rel_tol * std::fabs(b));
    const double m = 0.5 * (c - b);
    if (std::fabs(m) <= tol1 || fb == 0.0) return b;

    if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) {
        q = -q;
      } else {
        p = -p;
      }
      if (2.0 * p < std::min(3.0 * m * q - std::fabs(tol1 * q), std::fabs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += (std::fabs(d) > tol1) ? d : (m > 0.0 ? tol1 : -tol1);
    fb = f(b);
  }
  throw MaxIterExceeded("find_root: no convergence within max_iter");
}

struct Bracket {
  double lo;
  double hi;
};

/// Sign-change brackets of f on a uniform grid of `n` intervals over [lo, hi].
/// Exact zeros on the grid are reported as degenerate brackets.
template <class F>
std::vector<Bracket> scan_sign_changes(F&& f, double lo, double hi, int n) {
  std::vector<Bracket> out;
  if (n < 1 || !(hi > lo)) return out;
  double x0 = lo;
  double f0 = f(x0);
  for (int i = 1; i <= n; ++i) {
    const double x1 = (i == n) ? hi : lo + (hi - lo) * i / n;
    const double f1 = f(x1);
    if (f0 == 0.0) {
      out.push_back({x0, x0});
    } else if (f1 != 0.0 && (f0 > 0.0) != (f1 > 0.0)) {
      out.push_back({x0, x1});
    }
    x0 = x1;
    f0 = f1;
  }
  if (f0 == 0.0) out.push_back({x0, x0});
  return out;
}

// ---------------------------------------------------------------------------
// Minimization
// ---------------------------------------------------------------------------

struct MinimumResult {
  double x;
  double value;
};

/// Brent's golden-section/parabolic minimizer on [lo, hi].
template <class F>
MinimumResult minimize_bracketed(F&& f, double lo, double hi, const Tolerance& tol = {}) {
  tol.validate();
  constexpr double kGolden = 0.3819660112501051;
  double a = std::min(lo, hi), b = std::max(lo, hi);
  double x = a + kGolden * (b - a);
  double w = x, v = x;
  double fx = f(x);
  double fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  for (int iter = 0; iter < tol.max_iter; ++iter) {
    const double xm = 0.5 * (a + b);
    const double tol1 = std::sqrt(kEps) * std::fabs(x) + tol.abs_tol / 3.0;
    const double tol2 = 2.0 * tol1;
    if (std::fabs(x - xm) <= tol2 - 0.5 * (b - a)) return {x, fx};
    bool golden = true;
    if (std::fabs(e) > tol1) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::fabs(q);
      const double etemp = e;
      e = d;
      if (std::fabs(p) < std::fabs(0.5 * q * etemp) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (xm - x >= 0.0) ? tol1 : -tol1;
        golden = false;
      }
    }
    if (golden) {
      e = (x >= xm) ? a - x : b - x;
      d = kGolden * e;
    }
    const double u = (std::fabs(d) >= tol1) ? x + d : x + (d >= 0.0 ? tol1 : -tol1);
    const double fu = f(u);
    if (fu <= fx) {
      if (u >= x) {
        a = x;
      } else {
        b = x;
      }
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      if (u < x) {
        a = u;
      } else {
        b = u;
      }
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }
  throw MaxIterExceeded("minimize_bracketed: no convergence within max_iter");
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod abscissae and weights.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  double value, error, abs_value;
  int depth;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gauss_kronrod_15(F& f, double a, double b, int depth) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  double resabs = std::fabs(resk);
  std::array<double, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    resk += kWgk[j] * (f1[j] + f2[j]);
    resabs += kWgk[j] * (std::fabs(f1[j]) + std::fabs(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1[j] + f2[j]);
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::fabs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::fabs(f1[j] - mean) + std::fabs(f2[j] - mean));
  }
  double err = std::fabs((resk - resg) * half);
  resasc *= std::fabs(half);
  resabs *= std::fabs(half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) {
    err = std::max(50.0 * kEps * resabs, err);
  }
  return {a, b, resk * half, err, resabs, depth};
}

}  // namespace detail

/// Globally adaptive 15-point Gauss-Kronrod quadrature. The panel with the
/// largest error estimate is bisected until the summed error meets
/// max(abs_tol, rel_tol*|I|). `tol.max_iter` bounds the bisection depth of
/// any single panel. Endpoint square-root and logarithmic behavior is handled
/// by repeated bisection because abscissae never touch the endpoints.
template <class F>
QuadratureResult integrate_with_error(F&& f, double a, double b, const Tolerance& tol = {}) {
  tol.validate();
  if (a == b) return {};
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("integrate: limits must be finite");
  }
  constexpr int kMaxPanels = 200000;
  int evaluations = 0;
  auto counted = [&](double x) {
    ++evaluations;
    return f(x);
  };
  std::priority_queue<detail::Panel> active;
  std::vector<detail::Panel> retired;
  detail::Panel first = detail::gauss_kronrod_15(counted, a, b, 0);
  double total = first.value;
  double total_err = first.error;
  double total_abs = first.abs_value;
  active.push(first);
  int panels = 1;
  while (true) {
    const double target =
        std::max({tol.abs_tol, tol.rel_tol * std::fabs(total), 100.0 * kEps * total_abs});
    if (total_err <= target) break;
    if (active.empty()) {
      throw MaxDepthExceeded("integrate: tolerance not reachable; all panels at resolution limit");
    }
    detail::Panel p = active.top();
    active.pop();
    const double mid = 0.5 * (p.a + p.b);
    const double width = std::fabs(p.b - p.a);
    if (width <= 8.0 * kEps * std::max(std::fabs(p.a), std::fabs(p.b)) || mid == p.a || mid == p.b) {
      retired.push_back(p);
      continue;
    }
    if (p.depth + 1 > tol.max_iter || panels >= kMaxPanels) {
      throw MaxDepthExceeded("integrate: maximum subdivision depth exceeded");
    }
    detail::Panel left = detail::gauss_kronrod_15(counted, p.a, mid, p.depth + 1);
    detail::Panel right = detail::gauss_kronrod_15(counted, mid, p.b, p.depth + 1);
    total += left.value + right.value - p.value;
    total_err += left.error + right.error - p.error;
    total_abs += left.abs_value + right.abs_value - p.abs_value;
    active.push(left);
    active.push(right);
    ++panels;
  }
  // Re-sum from panels to shed accumulated cancellation in the running total.
  double value = 0.0, error = 0.0;
  while (!active.empty()) {
    value += active.top().value;
    error += active.top().error;
    active.pop();
  }
  for (const auto& p : retired) {
    value += p.value;
    error += p.error;
  }
  return {value, error, evaluations};
}

template <class F>
double integrate(F&& f, double a, double b, const Tolerance& tol = {}) {
  return integrate_with_error(std::forward<F>(f), a, b, tol).value;
}

/// Integral over [a, b] split at the given interior breakpoints.
template <class F>
double integrate_piecewise(F&& f, double a, double b, std::vector<double> breaks,
                           const Tolerance& tol = {}) {
  std::sort(breaks.begin(), breaks.end());
  double sum = 0.0;
  double left = a;
  for (double x : breaks) {
    if (x <= left || x >= b) continue;
    sum += integrate(f, left, x, tol);
    left = x;
  }
  return sum + integrate(f, left, b, tol);
}

// ---------------------------------------------------------------------------
// Differentiation
// ---------------------------------------------------------------------------

struct DerivativeEstimate {
  double value;
  double error;
};

/// Central second difference on steps h0, h0/2, h0/4 with two levels of
/// Richardson extrapolation (exact for polynomials up to degree 5).
template <class F>
DerivativeEstimate second_derivative(F&& f, double x, double h0) {
  const double floor = 64.0 * kEps * std::max(1.0, std::fabs(x));
  if (!(h0 > 0.0) || h0 / 4.0 < floor) {
    throw StepUnderflow("second_derivative: step below machine-precision floor");
  }
  const double f0 = f(x);
  auto central = [&](double h) {
    const double xp = x + h, xm = x - h;
    const double hh = 0.5 * (xp - xm);  // representable step
    return (f(xp) - 2.0 * f0 + f(xm)) / (hh * hh);
  };
  const double d1 = central(h0);
  const double d2 = central(h0 / 2.0);
  const double d3 = central(h0 / 4.0);
  const double r12 = (4.0 * d2 - d1) / 3.0;
  const double r23 = (4.0 * d3 - d2) / 3.0;
  const double value = (16.0 * r23 - r12) / 15.0;
  return {value, std::fabs(value - r23)};
}

/// Central first derivative with one Richardson level.
template <class F>
DerivativeEstimate first_derivative(F&& f, double x, double h0) {
  const double floor = 64.0 * kEps * std::max(1.0, std::fabs(x));
  if (!(h0 > 0.0) || h0 / 2.0 < floor) {
    throw StepUnderflow("first_derivative: step below machine-precision floor");
  }
  auto central = [&](double h) { return (f(x + h) - f(x - h)) / (2.0 * h); };
  const double d1 = central(h0);
  const double d2 = central(h0 / 2.0);
  const double d3 = central(h0 / 4.0);
  const double r12 = (4.0 * d2 - d1) / 3.0;
  const double r23 = (4.0 * d3 - d2) / 3.0;
  const double value = (16.0 * r23 - r12) / 15.0;
  return {value, std::fabs(value - r23)};
}

// ---------------------------------------------------------------------------
// Small helpers
// ---------------------------------------------------------------------------

struct LineFit {
  double slope;
  double intercept;
  double max_abs_residual;
};

/// Ordinary least-squares straight line through (x_i, y_i).
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DomainError("fit_line: need at least two paired samples");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("fit_line: abscissae are all equal");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    worst = std::max(worst, std::fabs(y[i] - (slope * x[i] + intercept)));
  }
  return {slope, intercept, worst};
}

}  // namespace cavity_ising::numerics
