#pragma once

// Per-point bodies shared by the serial and OpenMP kernels.

#include <algorithm>
#include <cmath>
#include <span>

#include "frameweave/kernels.hpp"

namespace frameweave::kernels::detail {

inline double multiplier_at(const WaveletGenerator& gen, const Ladder& ladder, double gamma) {
  const double g = std::abs(gamma);
  if (g == 0.0) return gen.power(0.0);
  const int j0 = ladder.base_index(g);
  double sum = 0.0;
  for (int j = j0 - ladder.below; j <= j0 + ladder.above; ++j) {
    sum += gen.power(gamma / ladder.lambda(j, 0));
  }
  return sum;
}

inline double masked_multiplier_at(const WaveletGenerator& gen, const Ladder& ladder,
                                   double gamma, int skip_first, int skip_last) {
  const double g = std::abs(gamma);
  if (g == 0.0) return gen.power(0.0);
  const int j0 = ladder.base_index(g);
  double sum = 0.0;
  for (int j = j0 - ladder.below; j <= j0 + ladder.above; ++j) {
    if (j >= skip_first && j <= skip_last) continue;
    sum += gen.power(gamma / ladder.lambda(j, 0));
  }
  return sum;
}

inline double table_combine_at(std::span<const double> base, std::span<const double> table,
                               int width, std::span<const int> choices, std::size_t i) {
  const std::size_t n = base.size();
  double sum = base[i];
  for (std::size_t r = 0; r < choices.size(); ++r) {
    sum += table[(r * static_cast<std::size_t>(width) + static_cast<std::size_t>(choices[r])) * n + i];
  }
  return sum;
}

inline void adversary_at(const WaveletGenerator& gen, const Ladder& ladder, double gamma,
                         double& lo, double& hi) {
  const double g = std::abs(gamma);
  lo = 0.0;
  hi = 0.0;
  if (g == 0.0) {
    lo = hi = gen.power(0.0);
    return;
  }
  const int j0 = ladder.base_index(g);
  for (int j = j0 - ladder.below; j <= j0 + ladder.above; ++j) {
    double mn = gen.power(gamma / ladder.lambda(j, 0));
    double mx = mn;
    for (int c = 1; c < ladder.width; ++c) {
      const double v = gen.power(gamma / ladder.lambda(j, c));
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
    lo += mn;
    hi += mx;
  }
}

inline void term_column(const WaveletGenerator& gen, const Ladder& ladder, int rows_first,
                        int rows_count, std::span<const double> gammas, std::size_t i,
                        std::span<double> out) {
  const std::size_t n = gammas.size();
  const double gamma = gammas[i];
  const double g = std::abs(gamma);
  const int j0 = g == 0.0 ? 0 : ladder.base_index(g);
  for (int r = 0; r < rows_count; ++r) {
    const int j = rows_first + r;
    const bool active = g != 0.0 && j >= j0 - ladder.below && j <= j0 + ladder.above;
    for (int c = 0; c < ladder.width; ++c) {
      out[static_cast<std::size_t>(r * ladder.width + c) * n + i] =
          active ? gen.power(gamma / ladder.lambda(j, c)) : 0.0;
    }
  }
}

inline double gabor_at(const GaborGenerator& gen, std::span<const double> nodes, double x) {
  // g(x − node) ≠ 0 requires node ∈ (x − hi, x − lo].
  const Interval sup = gen.support();
  auto first = std::lower_bound(nodes.begin(), nodes.end(), x - sup.hi);
  auto last = std::upper_bound(first, nodes.end(), x - sup.lo);
  double sum = 0.0;
  for (auto it = first; it != last; ++it) sum += gen.power(x - *it);
  return sum;
}

inline void gabor_adversary_at(const GaborGenerator& gen, double a, int N, double x, double& lo,
                               double& hi) {
  const Interval sup = gen.support();
  const double step = N * a;
  const long n_first = static_cast<long>(std::floor((x - sup.hi - (N - 1) * a) / step)) - 1;
  const long n_last = static_cast<long>(std::ceil((x - sup.lo) / step)) + 1;
  lo = 0.0;
  hi = 0.0;
  for (long n = n_first; n <= n_last; ++n) {
    const double base = static_cast<double>(n) * step;
    double mn = gen.power(x - base);
    double mx = mn;
    for (int l = 1; l < N; ++l) {
      const double v = gen.power(x - (base + l * a));
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
    lo += mn;
    hi += mx;
  }
}

}  // namespace frameweave::kernels::detail
