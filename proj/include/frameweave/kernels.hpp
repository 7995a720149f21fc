#pragma once

// Grid-sweep kernels. Every kernel exists twice with identical signatures:
// kernels::serial is the reference implementation, kernels::omp distributes
// the outer grid loop across OpenMP threads. Each output element is computed
// by exactly one thread with the same summation order as the serial version,
// so the two agree bit for bit.

#include <cmath>
#include <span>
#include <vector>

#include "frameweave/generators.hpp"

namespace frameweave::kernels {

/// Dilations λ(j, c) for j in [first_row, first_row + rows), `width` entries
/// per row, plus the per-γ summation window: at frequency γ only rows
/// j ∈ [j0(γ) − below, j0(γ) + above] are summed, where j0(γ) is the integer
/// with q^j0 ≤ |γ| < q^(j0+1) and q = a^N.
struct Ladder {
  double q = 2.0;
  int first_row = 0;
  int rows = 0;
  int width = 1;
  int below = 0;
  int above = 0;
  std::vector<double> lambdas;  // row-major, rows * width

  double lambda(int j, int c) const noexcept {
    return lambdas[static_cast<std::size_t>((j - first_row) * width + c)];
  }
  int last_row() const noexcept { return first_row + rows - 1; }

  /// j0(|γ|) for |γ| > 0, exact whenever integer powers of q are exact.
  int base_index(double abs_gamma) const noexcept;
  /// True when every row needed for |γ| in [lo, hi] is tabulated.
  bool covers(double abs_lo, double abs_hi) const noexcept;
};

/// Tabulates λ(j, c) = a^(N j + offset(j, c)).
template <typename Offset>
Ladder make_ladder(double a, int N, int first_row, int rows, int width, int below, int above,
                   Offset&& offset);

namespace serial {

/// out[i] = scale · Σ_j |ψ̂(γ_i / λ(j, 0))|² over the per-γ window.
/// γ = 0 yields scale · |ψ̂(0)|² (zero for every admissible generator).
void multiplier_sweep(const WaveletGenerator& gen, const Ladder& ladder, double scale,
                      std::span<const double> gammas, std::span<double> out);

/// Pointwise adversary sums: out_min[i] = scale · Σ_j min_c |ψ̂(γ_i/λ(j,c))|²,
/// out_max likewise with max.
void adversary_sweep(const WaveletGenerator& gen, const Ladder& ladder, double scale,
                     std::span<const double> gammas, std::span<double> out_min,
                     std::span<double> out_max);

/// out[(r * width + c) * n + i] = |ψ̂(γ_i / λ(j, c))|² for j = rows_first + r
/// when j is inside the per-γ window, else 0. `rows_first`/`rows_count`
/// select a sub-block of the ladder.
void term_table(const WaveletGenerator& gen, const Ladder& ladder, int rows_first,
                int rows_count, std::span<const double> gammas, std::span<double> out);

/// out[i] = scale · Σ_n |g(x_i − nodes[n])|²; nodes sorted ascending.
void gabor_sweep(const GaborGenerator& gen, std::span<const double> nodes, double scale,
                 std::span<const double> xs, std::span<double> out);

/// Pointwise adversary over translates: Σ_n min_ℓ / max_ℓ |g(x − nNa − ℓa)|².
void gabor_adversary_sweep(const GaborGenerator& gen, double a, int N, double scale,
                           std::span<const double> xs, std::span<double> out_min,
                           std::span<double> out_max);


/// As multiplier_sweep with every row in `skip` left out (rows use choice 0).
void masked_multiplier_sweep(const WaveletGenerator& gen, const Ladder& ladder, double scale,
                             int skip_first, int skip_last, std::span<const double> gammas,
                             std::span<double> out);

/// out[i] = scale · (base[i] + Σ_r table[(r * width + choices[r]) * n + i]).
void table_combine(std::span<const double> base, std::span<const double> table, int width,
                   std::span<const int> choices, double scale, std::span<double> out);

}  // namespace serial

namespace omp {

void multiplier_sweep(const WaveletGenerator& gen, const Ladder& ladder, double scale,
                      std::span<const double> gammas, std::span<double> out);
void adversary_sweep(const WaveletGenerator& gen, const Ladder& ladder, double scale,
                     std::span<const double> gammas, std::span<double> out_min,
                     std::span<double> out_max);
void term_table(const WaveletGenerator& gen, const Ladder& ladder, int rows_first,
                int rows_count, std::span<const double> gammas, std::span<double> out);
void gabor_sweep(const GaborGenerator& gen, std::span<const double> nodes, double scale,
                 std::span<const double> xs, std::span<double> out);
void gabor_adversary_sweep(const GaborGenerator& gen, double a, int N, double scale,
                           std::span<const double> xs, std::span<double> out_min,
                           std::span<double> out_max);
void masked_multiplier_sweep(const WaveletGenerator& gen, const Ladder& ladder, double scale,
                             int skip_first, int skip_last, std::span<const double> gammas,
                             std::span<double> out);
void table_combine(std::span<const double> base, std::span<const double> table, int width,
                   std::span<const int> choices, double scale, std::span<double> out);

/// Caps the thread count used by the omp kernels (<= 0 leaves it unchanged).
void set_thread_cap(int threads);
int max_threads();

}  // namespace omp

struct Extremes {
  double min_value;
  std::size_t argmin;
  double max_value;
  std::size_t argmax;
};

/// First occurrence of the minimum and maximum; values must be non-empty.
Extremes find_extremes(std::span<const double> values);

// ---------------------------------------------------------------------------

template <typename Offset>
Ladder make_ladder(double a, int N, int first_row, int rows, int width, int below, int above,
                   Offset&& offset) {
  Ladder l;
  l.q = std::pow(a, N);
  l.first_row = first_row;
  l.rows = rows;
  l.width = width;
  l.below = below;
  l.above = above;
  l.lambdas.resize(static_cast<std::size_t>(rows * width));
  for (int r = 0; r < rows; ++r) {
    const int j = first_row + r;
    for (int c = 0; c < width; ++c) {
      l.lambdas[static_cast<std::size_t>(r * width + c)] =
          std::pow(a, static_cast<double>(N) * j + offset(j, c));
    }
  }
  return l;
}

}  // namespace frameweave::kernels

