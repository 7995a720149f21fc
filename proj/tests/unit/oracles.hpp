#pragma once

// Closed-form references written independently of the library.

#include <algorithm>
#include <cmath>
#include <functional>

namespace oracle {

/// |ψ̂(γ)|² for ψ̂(γ) = |γ|^alpha on [-cutoff, cutoff].
inline double powerlaw_power(double gamma, double alpha, double cutoff) {
  const double g = std::abs(gamma);
  return g <= cutoff ? std::pow(g, 2.0 * alpha) : 0.0;
}

/// (1/b) Σ_j power(γ / a^(N j + ell(j))) summed directly over a wide j range.
inline double multiplier(double gamma, double a, double b, int N,
                         const std::function<int(int)>& ell,
                         const std::function<double(double)>& power, int j_lo = -80,
                         int j_hi = 80) {
  double s = 0.0;
  for (int j = j_lo; j <= j_hi; ++j) s += power(gamma / std::pow(a, N * j + ell(j)));
  return s / b;
}

/// (1/b) Σ_j min_ℓ / max_ℓ power(γ / a^(N j + ℓ)).
inline std::pair<double, double> adversary(double gamma, double a, double b, int N,
                                           const std::function<double(double)>& power,
                                           int j_lo = -80, int j_hi = 80) {
  double lo = 0.0, hi = 0.0;
  for (int j = j_lo; j <= j_hi; ++j) {
    double mn = INFINITY, mx = 0.0;
    for (int l = 0; l < N; ++l) {
      const double v = power(gamma / std::pow(a, N * j + l));
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
    lo += mn;
    hi += mx;
  }
  return {lo / b, hi / b};
}

/// Number of translates n·N·a + ℓ_n·a of [0, L) containing x.
inline int gabor_cover_count(double x, double a, int N, double L,
                             const std::function<int(long)>& ell) {
  int c = 0;
  for (long n = -200; n <= 200; ++n) {
    const double s = static_cast<double>(n) * N * a + ell(n) * a;
    if (x >= s && x < s + L) ++c;
  }
  return c;
}

}  // namespace oracle
