#include <cmath>
#include <stdexcept>

#include "frameweave/kernels.hpp"
#include "kernel_points.hpp"

namespace frameweave::kernels {

int Ladder::base_index(double abs_gamma) const noexcept {
  int j0 = static_cast<int>(std::floor(std::log(abs_gamma) / std::log(q)));
  if (abs_gamma < std::pow(q, j0)) --j0;
  if (abs_gamma >= std::pow(q, j0 + 1)) ++j0;
  return j0;
}

bool Ladder::covers(double abs_lo, double abs_hi) const noexcept {
  if (!(abs_lo > 0.0) || abs_hi < abs_lo) return false;
  return base_index(abs_lo) - below >= first_row && base_index(abs_hi) + above <= last_row();
}

Extremes find_extremes(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("find_extremes: empty input");
  Extremes e{values[0], 0, values[0], 0};
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < e.min_value) {
      e.min_value = values[i];
      e.argmin = i;
    }
    if (values[i] > e.max_value) {
      e.max_value = values[i];
      e.argmax = i;
    }
  }
  return e;
}

namespace serial {

void multiplier_sweep(const WaveletGenerator& gen, const Ladder& ladder, double scale,
                      std::span<const double> gammas, std::span<double> out) {
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    out[i] = scale * detail::multiplier_at(gen, ladder, gammas[i]);
  }
}

void adversary_sweep(const WaveletGenerator& gen, const Ladder& ladder, double scale,
                     std::span<const double> gammas, std::span<double> out_min,
                     std::span<double> out_max) {
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    double lo, hi;
    detail::adversary_at(gen, ladder, gammas[i], lo, hi);
    out_min[i] = scale * lo;
    out_max[i] = scale * hi;
  }
}

void term_table(const WaveletGenerator& gen, const Ladder& ladder, int rows_first,
                int rows_count, std::span<const double> gammas, std::span<double> out) {
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    detail::term_column(gen, ladder, rows_first, rows_count, gammas, i, out);
  }
}

void gabor_sweep(const GaborGenerator& gen, std::span<const double> nodes, double scale,
                 std::span<const double> xs, std::span<double> out) {
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = scale * detail::gabor_at(gen, nodes, xs[i]);
}

void gabor_adversary_sweep(const GaborGenerator& gen, double a, int N, double scale,
                           std::span<const double> xs, std::span<double> out_min,
                           std::span<double> out_max) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double lo, hi;
    detail::gabor_adversary_at(gen, a, N, xs[i], lo, hi);
    out_min[i] = scale * lo;
    out_max[i] = scale * hi;
  }
}

void masked_multiplier_sweep(const WaveletGenerator& gen, const Ladder& ladder, double scale,
                             int skip_first, int skip_last, std::span<const double> gammas,
                             std::span<double> out) {
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    out[i] = scale * detail::masked_multiplier_at(gen, ladder, gammas[i], skip_first, skip_last);
  }
}

void table_combine(std::span<const double> base, std::span<const double> table, int width,
                   std::span<const int> choices, double scale, std::span<double> out) {
  for (std::size_t i = 0; i < base.size(); ++i) {
    out[i] = scale * detail::table_combine_at(base, table, width, choices, i);
  }
}

}  // namespace serial
}  // namespace frameweave::kernels
