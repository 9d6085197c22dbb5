#pragma once

// Complete elliptic integrals by the arithmetic-geometric mean, and the band
// energy kernel of the transverse-field Ising chain
//
//   I(h) = (1/2) ∫_0^π sqrt((h - cos k)^2 + sin^2 k) dk = (1 + h) E(4h / (1 + h)^2).

#include <cmath>
#include <numbers>

#include "cavity_ising/errors.hpp"

namespace cavity_ising::special {

/// Parameter m = k^2 of a complete elliptic integral.
struct EllipticParameter {
  double m;
};

namespace detail {

struct EllipticSet {
  double K;           // K(m)
  double E;           // E(m)
  double K_minus_E;   // K - E without cancellation
  double tail;        // sum_{n>=1} 2^n c_n^2, equal to 2(K - E)/K - m
};

// AGM with a0 = 1, b0 = sqrt(mc), c0^2 = m, where mc = 1 - m is supplied
// separately so callers can pass an exactly computed complement. The c_n are
// advanced as c_{n+1} = c_n^2 / (4 a_{n+1}) which has no cancellation.
inline EllipticSet agm_set(double m, double mc) {
  double a = 1.0;
  double b = std::sqrt(mc);
  double c2 = m;       // c_n^2, may be negative for n = 0
  double weight = 0.5; // 2^{n-1}
  double head = weight * c2;
  double tail = 0.0;
  for (int n = 0; n < 64; ++n) {
    const double a_next = 0.5 * (a + b);
    const double b_next = std::sqrt(a * b);
    const double c_next = c2 / (4.0 * a_next);
    a = a_next;
    b = b_next;
    c2 = c_next * c_next;
    weight *= 2.0;
    tail += 2.0 * weight * c2;
    if (weight * c2 <= 1e-18 * std::fabs(head + 0.5 * tail) && std::fabs(a - b) <= 1e-15 * a) break;
  }
  const double K = std::numbers::pi / (2.0 * a);
  const double S = head + 0.5 * tail;  // sum_{n>=0} 2^{n-1} c_n^2
  return {K, K * (1.0 - S), K * S, tail};
}

}  // namespace detail

/// E(m) = ∫_0^{π/2} sqrt(1 - m sin^2 θ) dθ for m <= 1, negative m included.
inline double elliptic_E(EllipticParameter p) {
  const double m = p.m;
  if (!(m <= 1.0)) throw DomainError("elliptic_E: parameter m must satisfy m <= 1");
  if (m == 1.0) return 1.0;
  return detail::agm_set(m, 1.0 - m).E;
}

/// K(m) = ∫_0^{π/2} (1 - m sin^2 θ)^{-1/2} dθ for m < 1.
inline double elliptic_K(EllipticParameter p) {
  const double m = p.m;
  if (!(m < 1.0)) throw DomainError("elliptic_K: parameter m must satisfy m < 1");
  return detail::agm_set(m, 1.0 - m).K;
}

inline double elliptic_E(double m) { return elliptic_E(EllipticParameter{m}); }
inline double elliptic_K(double m) { return elliptic_K(EllipticParameter{m}); }

namespace detail {

// Kernel parameter m = 4h/(1+h)^2 with its complement ((1-h)/(1+h))^2.
inline EllipticSet kernel_set(double h) {
  const double r = (1.0 - h) / (1.0 + h);
  const double mc = r * r;
  const double m = 4.0 * h / ((1.0 + h) * (1.0 + h));
  return agm_set(m, mc);
}

}  // namespace detail

/// I(h) = (1 + h) E(4h/(1+h)^2), regular at h = 1 where I = 2.
inline double ising_kernel(double h) {
  if (!(h >= 0.0)) throw DomainError("ising_kernel: h must be >= 0");
  if (h == 0.0) return std::numbers::pi / 2.0;
  if (h == 1.0) return 2.0;
  return (1.0 + h) * detail::kernel_set(h).E;
}

/// I'(h) = E + (E - K)(1 - h)/(2h); I'(0) = 0 and I'(1) = 1 are exact.
inline double ising_kernel_d1(double h) {
  if (!(h >= 0.0)) throw DomainError("ising_kernel_d1: h must be >= 0");
  if (h == 0.0) return 0.0;
  if (h == 1.0) return 1.0;
  const auto s = detail::kernel_set(h);
  return s.E - s.K_minus_E * (1.0 - h) / (2.0 * h);
}

/// I''(h) = (1 + h)[(1 + m_c)K - 2E]/(4h^2), m_c = ((1-h)/(1+h))^2.
/// Diverges like -(1/2) ln|h - 1|; points with |h - 1| < 1e-10 are refused.
inline double ising_kernel_d2(double h) {
  if (!(h >= 0.0)) throw DomainError("ising_kernel_d2: h must be >= 0");
  if (std::fabs(h - 1.0) < 1e-10) {
    throw SingularPoint("ising_kernel_d2: logarithmic divergence at h = 1");
  }
  if (h < 1e-4) {
    // I = π/2 + πh²/8 + πh⁴/128 + O(h⁶)
    return std::numbers::pi / 4.0 + 3.0 * std::numbers::pi * h * h / 32.0;
  }
  const auto s = detail::kernel_set(h);
  return (1.0 + h) * s.K * s.tail / (4.0 * h * h);
}

}  // namespace cavity_ising::special
