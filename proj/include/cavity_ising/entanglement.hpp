#pragma once

// Entanglement entropy of the transverse-field Ising ground state at field h̃,
// from the Majorana correlations of the infinite chain
//   G_l = (1/π) ∫_0^π [cos(kl)(h̃ − cos k) − sin(kl) sin k]/ω_k dk = h̃ C_l − C_{l−1},
//   C_l = (1/π) ∫_0^π cos(kl)/ω_k dk.
// The C_l are Fourier coefficients of the periodic analytic function 1/ω_k and
// are taken from one FFT on N ≥ 64/|1 − h̃| points, which resolves them to
// rounding. For a block of ℓ sites the ν_j are the singular values of the
// Toeplitz matrix T_ij = G_{i−j}, and S = Σ_j H((1 + ν_j)/2).

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "cavity_ising/errors.hpp"
#include "cavity_ising/landscape.hpp"
#include "cavity_ising/numerics.hpp"

namespace cavity_ising::entanglement {

inline constexpr int kMaxBlock = 2048;
inline constexpr std::size_t kMaxFftPoints = std::size_t{1} << 23;

struct CorrelationMatrix {
  int block_size;
  double field;
  std::vector<double> G;  // G[l + block_size − 1] = G_l for l ∈ [−ℓ+1, ℓ−1]

  [[nodiscard]] double at(int l) const { return G[static_cast<std::size_t>(l + block_size - 1)]; }
};

inline std::size_t fft_points(double h, int block_size) {
  const double gap = std::fabs(1.0 - h);
  std::size_t n = 256;
  const double need = std::max(4.0 * block_size, gap > 0.0 ? 64.0 / gap : 0.0);
  while (static_cast<double>(n) < need && n < kMaxFftPoints) n *= 2;
  return n;
}

/// C_l for l = 0..l_max by trapezoid/FFT on N points.
inline std::vector<double> inverse_dispersion_coefficients(double h, int l_max) {
  const std::size_t n = fft_points(h, l_max);
  std::vector<double> samples(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double k = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    samples[j] = 1.0 / model::detail::dispersion(h, k);
  }
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spectrum;
  fft.fwd(spectrum, samples);
  std::vector<double> c(static_cast<std::size_t>(l_max) + 1);
  for (int l = 0; l <= l_max; ++l) c[static_cast<std::size_t>(l)] = spectrum[static_cast<std::size_t>(l)].real() / static_cast<double>(n);
  return c;
}

inline CorrelationMatrix correlation_matrix(double h_t, int block_size) {
  if (!(h_t >= 0.0)) throw DomainError("correlation_matrix: h_t must be >= 0");
  if (block_size < 1 || block_size > kMaxBlock) {
    throw DomainError("correlation_matrix: block_size must lie in [1, 2048]");
  }
  const int L = block_size;
  CorrelationMatrix m{L, h_t, std::vector<double>(static_cast<std::size_t>(2 * L - 1))};
  if (h_t == 1.0) {
    // 1/ω is not integrable at k = 0, but G_l = −1/(π(l − 1/2)) in closed form.
    for (int l = -L + 1; l <= L - 1; ++l) {
      m.G[static_cast<std::size_t>(l + L - 1)] = -1.0 / (std::numbers::pi * (l - 0.5));
    }
    return m;
  }
  const auto c = inverse_dispersion_coefficients(h_t, L);
  auto C = [&](int l) { return c[static_cast<std::size_t>(std::abs(l))]; };
  for (int l = -L + 1; l <= L - 1; ++l) m.G[static_cast<std::size_t>(l + L - 1)] = h_t * C(l) - C(l - 1);
  return m;
}

/// ν_j ∈ [0, 1], ascending.
inline std::vector<double> correlation_spectrum(const CorrelationMatrix& m) {
  const int L = m.block_size;
  Eigen::MatrixXd T(L, L);
  for (int i = 0; i < L; ++i) {
    for (int j = 0; j < L; ++j) T(i, j) = m.at(i - j);
  }
  const Eigen::MatrixXd TT = T * T.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(TT, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw EigenFailure("correlation_spectrum: eigensolver did not converge");
  std::vector<double> nu(static_cast<std::size_t>(L));
  for (int i = 0; i < L; ++i) nu[static_cast<std::size_t>(i)] = std::sqrt(std::max(0.0, es.eigenvalues()(i)));
  return nu;
}

/// H((1 + ν)/2) in nats.
inline double binary_entropy_of(double nu) {
  const double p = 0.5 * (1.0 + std::min(1.0, std::fabs(nu)));
  const double q = 1.0 - p;
  double s = 0.0;
  if (p > 0.0) s -= p * std::log(p);
  if (q > 0.0) s -= q * std::log(q);
  return s;
}

/// Entropy of ℓ contiguous sites of the infinite chain (two cuts).
inline double block_entropy(double h_t, int block_size) {
  double s = 0.0;
  for (double nu : correlation_spectrum(correlation_matrix(h_t, block_size))) s += binary_entropy_of(nu);
  return s;
}

/// Block size that saturates the entropy: the power of two at or above 8ξ,
/// ξ = 1/|1 − h̃|, within [64, 2048].
inline int saturating_block(double h_t) {
  const double gap = std::fabs(1.0 - h_t);
  const double target = gap > 0.0 ? 8.0 / gap : static_cast<double>(kMaxBlock);
  int l = 64;
  while (l < target && l < kMaxBlock) l *= 2;
  return l;
}

/// Entropy across a single cut, taken as half of the saturated block entropy.
inline double half_chain_entropy(double h_t) { return 0.5 * block_entropy(h_t, saturating_block(h_t)); }

struct DivergenceFit {
  double slope_minus;  // B̃y → 1⁻
  double slope_plus;   // B̃y → 1⁺
  std::vector<double> entropy_minus;
  std::vector<double> entropy_plus;
  std::vector<double> field_minus;
  std::vector<double> field_plus;
};

/// Fits S against −ln δ at B̃y = 1 ∓ δ, evaluating S at the field of the
/// zero-temperature landscape minimum.
inline DivergenceFit entropy_divergence_fit(double g_t, const std::vector<double>& delta_grid) {
  if (delta_grid.size() < 2) throw DomainError("entropy_divergence_fit: need at least two deltas");
  for (double d : delta_grid) {
    if (!(d > 0.0 && d < 1.0)) throw DomainError("entropy_divergence_fit: deltas must lie in (0, 1)");
  }
  DivergenceFit fit;
  std::vector<double> x;
  for (double d : delta_grid) {
    x.push_back(-std::log(d));
    for (int side : {-1, 1}) {
      const double By = 1.0 + side * d;
      const auto r = landscape::minimize_landscape({g_t, By});
      const double h = r.h_star;
      const double s = half_chain_entropy(h);
      (side < 0 ? fit.entropy_minus : fit.entropy_plus).push_back(s);
      (side < 0 ? fit.field_minus : fit.field_plus).push_back(h);
    }
  }
  fit.slope_minus = numerics::fit_line(x, fit.entropy_minus).slope;
  fit.slope_plus = numerics::fit_line(x, fit.entropy_plus).slope;
  return fit;
}

/// Default δ grid: every block stays below the 2048-site cap at saturation.
inline std::vector<double> default_delta_grid() { return {1e-2, 5e-3, 2.5e-3}; }

}  // namespace cavity_ising::entanglement
