#include <omp.h>

#include <cstddef>

#include "frameweave/kernels.hpp"
#include "kernel_points.hpp"

namespace frameweave::kernels::omp {

namespace {
using Index = std::ptrdiff_t;
Index extent(std::span<const double> s) { return static_cast<Index>(s.size()); }
}  // namespace

void set_thread_cap(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

int max_threads() { return omp_get_max_threads(); }

void multiplier_sweep(const WaveletGenerator& gen, const Ladder& ladder, double scale,
                      std::span<const double> gammas, std::span<double> out) {
  const Index n = extent(gammas);
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] =
        scale * detail::multiplier_at(gen, ladder, gammas[static_cast<std::size_t>(i)]);
  }
}

void adversary_sweep(const WaveletGenerator& gen, const Ladder& ladder, double scale,
                     std::span<const double> gammas, std::span<double> out_min,
                     std::span<double> out_max) {
  const Index n = extent(gammas);
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    double lo, hi;
    detail::adversary_at(gen, ladder, gammas[u], lo, hi);
    out_min[u] = scale * lo;
    out_max[u] = scale * hi;
  }
}

void term_table(const WaveletGenerator& gen, const Ladder& ladder, int rows_first,
                int rows_count, std::span<const double> gammas, std::span<double> out) {
  const Index n = extent(gammas);
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    detail::term_column(gen, ladder, rows_first, rows_count, gammas, static_cast<std::size_t>(i),
                        out);
  }
}

void gabor_sweep(const GaborGenerator& gen, std::span<const double> nodes, double scale,
                 std::span<const double> xs, std::span<double> out) {
  const Index n = extent(xs);
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    out[u] = scale * detail::gabor_at(gen, nodes, xs[u]);
  }
}

void gabor_adversary_sweep(const GaborGenerator& gen, double a, int N, double scale,
                           std::span<const double> xs, std::span<double> out_min,
                           std::span<double> out_max) {
  const Index n = extent(xs);
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    double lo, hi;
    detail::gabor_adversary_at(gen, a, N, xs[u], lo, hi);
    out_min[u] = scale * lo;
    out_max[u] = scale * hi;
  }
}

void masked_multiplier_sweep(const WaveletGenerator& gen, const Ladder& ladder, double scale,
                             int skip_first, int skip_last, std::span<const double> gammas,
                             std::span<double> out) {
  const Index n = extent(gammas);
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    out[u] = scale * detail::masked_multiplier_at(gen, ladder, gammas[u], skip_first, skip_last);
  }
}

void table_combine(std::span<const double> base, std::span<const double> table, int width,
                   std::span<const int> choices, double scale, std::span<double> out) {
  const Index n = extent(base);
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    out[u] = scale * detail::table_combine_at(base, table, width, choices, u);
  }
}

}  // namespace frameweave::kernels::omp
