#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "frameweave/kernels.hpp"

namespace frameweave::detail {

struct SearchResult {
  double min_value = 0.0;
  double min_at = 0.0;
  double max_value = 0.0;
  double max_at = 0.0;
  double gain_min = 0.0;
  double gain_max = 0.0;
};

struct GridLayout {
  std::span<const double> grid;  // positive-segment abscissae, ascending
  bool periodic = true;
  double period = 1.0;           // factor (log-spaced) or length (uniform)
  bool log_spaced = true;
  bool both_signs = false;       // values hold a second, mirrored segment
};

inline std::vector<double> refinement_points(double left, double right, int count,
                                             bool log_spaced) {
  std::vector<double> xs(static_cast<std::size_t>(count));
  for (int r = 0; r < count; ++r) {
    const double t = count > 1 ? static_cast<double>(r) / (count - 1) : 0.5;
    xs[static_cast<std::size_t>(r)] =
        log_spaced ? left * std::pow(right / left, t) : left + (right - left) * t;
  }
  return xs;
}

/// Grid extrema followed by one refinement pass around the arg-min of
/// `min_values` and the arg-max of `max_values`. `refine(xs, want_min, out)`
/// evaluates the min- or max-curve at arbitrary abscissae.
template <typename Refine>
SearchResult search_extremes(const GridLayout& layout, std::span<const double> min_values,
                             std::span<const double> max_values, int refine_points,
                             Refine&& refine) {
  const std::size_t n = layout.grid.size();
  const auto lo = kernels::find_extremes(min_values);
  const auto hi = kernels::find_extremes(max_values);

  auto abscissa = [&](std::size_t idx) {
    const double x = layout.grid[idx % n];
    return idx < n ? x : -x;
  };
  auto neighbourhood = [&](std::size_t idx) {
    const std::size_t i = idx % n;
    const double x = layout.grid[i];
    double left, right;
    if (i > 0) {
      left = layout.grid[i - 1];
    } else if (layout.periodic) {
      left = layout.log_spaced ? layout.grid[n - 1] / layout.period
                               : layout.grid[n - 1] - layout.period;
    } else {
      left = x;
    }
    if (i + 1 < n) {
      right = layout.grid[i + 1];
    } else if (layout.periodic) {
      right = layout.log_spaced ? layout.grid[0] * layout.period : layout.grid[0] + layout.period;
    } else {
      right = x;
    }
    std::vector<double> xs = refinement_points(left, right, refine_points, layout.log_spaced);
    if (idx >= n) {
      for (double& v : xs) v = -v;
    }
    return xs;
  };

  SearchResult res;
  res.min_value = lo.min_value;
  res.min_at = abscissa(lo.argmin);
  res.max_value = hi.max_value;
  res.max_at = abscissa(hi.argmax);

  if (refine_points > 0) {
    const std::vector<double> xs_min = neighbourhood(lo.argmin);
    std::vector<double> vals(xs_min.size());
    refine(std::span<const double>(xs_min), true, std::span<double>(vals));
    for (std::size_t r = 0; r < xs_min.size(); ++r) {
      if (vals[r] < res.min_value) {
        res.min_value = vals[r];
        res.min_at = xs_min[r];
      }
    }
    const std::vector<double> xs_max = neighbourhood(hi.argmax);
    vals.assign(xs_max.size(), 0.0);
    refine(std::span<const double>(xs_max), false, std::span<double>(vals));
    for (std::size_t r = 0; r < xs_max.size(); ++r) {
      if (vals[r] > res.max_value) {
        res.max_value = vals[r];
        res.max_at = xs_max[r];
      }
    }
  }
  res.gain_min = lo.min_value - res.min_value;
  res.gain_max = res.max_value - hi.max_value;
  return res;
}

}  // namespace frameweave::detail
