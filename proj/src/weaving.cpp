#include "frameweave/weaving.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "frameweave/detail/search.hpp"

namespace frameweave {

double PacketFamily::scale(int j) const {
  return std::pow(params.a, static_cast<double>(space_index(j)));
}

PacketFamily packet_family(const SystemParams& params, int ell) {
  params.validate();
  if (ell < 0 || ell >= params.N) {
    throw std::invalid_argument(fmt::format("family index {} outside [0, {})", ell, params.N));
  }
  return {params, ell};
}

double grid_tolerance(const WeaveCertificate& cert) {
  return 2.0 * std::max(cert.refine_gain_min, cert.refine_gain_max) + 10.0 * cert.tail_bound +
         1e-9 * std::max(1.0, std::abs(cert.U_weave));
}

BoundsCertificate woven_bounds(const WaveletGenerator& gen, const SystemParams& params,
                               const WeavingPattern& pattern, int grid_points) {
  BoundsCertificate cert = frame_bounds(gen, params, pattern, grid_points);
  const WeaveCertificate w = weave_certificate(gen, params, grid_points);
  cert.L_weave = w.L_weave;
  cert.U_weave = w.U_weave;
  return cert;
}

namespace {

std::vector<double> with_mirror(const std::vector<double>& grid, bool both_signs) {
  std::vector<double> out = grid;
  if (both_signs) {
    for (const double g : grid) out.push_back(-g);
  }
  return out;
}

WeaveCertificate adversary_pass(const WaveletGenerator& gen, const SystemParams& params,
                                const SweepOptions& opts, const TruncationDepth& depth) {
  const SweepPlan plan = plan_period(gen, params, opts.grid_points);
  const kernels::Ladder ladder = choice_ladder(params, plan, depth);
  const double scale = 1.0 / params.b;

  const std::vector<double> grid = plan.abscissae();
  const std::vector<double> xs = with_mirror(grid, plan.both_signs);
  std::vector<double> lo(xs.size()), hi(xs.size());
  kernels::omp::adversary_sweep(gen, ladder, scale, xs, lo, hi);

  detail::GridLayout layout{grid, true, plan.period_factor(), true, plan.both_signs};
  const auto res = detail::search_extremes(
      layout, lo, hi, opts.refine_points,
      [&](std::span<const double> pts, bool want_min, std::span<double> out) {
        std::vector<double> other(pts.size());
        if (want_min) {
          kernels::serial::adversary_sweep(gen, ladder, scale, pts, out, other);
        } else {
          kernels::serial::adversary_sweep(gen, ladder, scale, pts, other, out);
        }
      });

  WeaveCertificate cert;
  cert.L_weave = res.min_value;
  cert.U_weave = res.max_value;
  cert.argmin = res.min_at;
  cert.argmax = res.max_at;
  cert.refine_gain_min = res.gain_min;
  cert.refine_gain_max = res.gain_max;
  cert.grid = {plan.lo, plan.lo * plan.period_factor(), plan.points, 1, true, plan.both_signs};
  cert.tail_bound = depth.tail_bound;

  const double g = std::abs(cert.argmin);
  if (g > 0.0) {
    const int j0 = ladder.base_index(g);
    cert.witness_window = {j0 - depth.below, j0 + depth.above};
    for (int j = cert.witness_window.first; j <= cert.witness_window.last; ++j) {
      int best = 0;
      double best_v = gen.power(cert.argmin / ladder.lambda(j, 0));
      for (int c = 1; c < params.N; ++c) {
        const double v = gen.power(cert.argmin / ladder.lambda(j, c));
        if (v < best_v) {
          best_v = v;
          best = c;
        }
      }
      cert.witness_choices.push_back(best);
    }
  }
  return cert;
}

void require_window(IndexRange window) {
  if (window.empty()) throw std::invalid_argument("pattern window must be non-empty");
}

}  // namespace

WeaveCertificate weave_certificate(const WaveletGenerator& gen, const SystemParams& params,
                                   int grid_points) {
  SweepOptions opts;
  opts.grid_points = grid_points;
  return weave_certificate(gen, params, opts);
}

WeaveCertificate weave_certificate(const WaveletGenerator& gen, const SystemParams& params,
                                   const SweepOptions& options) {
  detail::check_sweep_inputs(gen, params, options);
  TruncationDepth depth = truncation_depth(gen, params);
  WeaveCertificate cert = adversary_pass(gen, params, options, depth);
  if (cert.L_weave > 0.0 && cert.tail_bound > options.tail_relative * cert.L_weave) {
    depth = truncation_depth(gen, params, 0.5 * options.tail_relative * cert.L_weave);
    cert = adversary_pass(gen, params, options, depth);
  }
  cert.certified = cert.L_weave > cert.tail_bound;
  return cert;
}

std::vector<WitnessRow> weave_witness_curve(const WaveletGenerator& gen,
                                            const SystemParams& params, int grid_points) {
  SweepOptions opts;
  opts.grid_points = grid_points;
  detail::check_sweep_inputs(gen, params, opts);
  const TruncationDepth depth = truncation_depth(gen, params);
  const SweepPlan plan = plan_period(gen, params, grid_points);
  const kernels::Ladder ladder = choice_ladder(params, plan, depth);
  const std::vector<double> xs = with_mirror(plan.abscissae(), plan.both_signs);

  std::vector<WitnessRow> rows;
  rows.reserve(xs.size());
  for (const double x : xs) {
    WitnessRow row{x, 0.0, 0.0, {}, 0};
    const int j0 = ladder.base_index(std::abs(x));
    row.first_row = j0 - depth.below;
    for (int j = row.first_row; j <= j0 + depth.above; ++j) {
      int best = 0;
      double mn = gen.power(x / ladder.lambda(j, 0));
      double mx = mn;
      for (int c = 1; c < params.N; ++c) {
        const double v = gen.power(x / ladder.lambda(j, c));
        if (v < mn) {
          mn = v;
          best = c;
        }
        mx = std::max(mx, v);
      }
      row.min_sum += mn;
      row.max_sum += mx;
      row.argmin_choices.push_back(best);
    }
    row.min_sum /= params.b;
    row.max_sum /= params.b;
    rows.push_back(std::move(row));
  }
  return rows;
}

PatternTable::PatternTable(const WaveletGenerator& gen, const SystemParams& params,
                           IndexRange window, const SweepOptions& options,
                           std::optional<double> tail_target)
    : gen_(gen), params_(params), window_(window), options_(options) {
  detail::check_sweep_inputs(gen, params, options);
  require_window(window);

  plan_ = plan_period(gen, params, options.grid_points);
  plan_.lo = gen.outer_radius() * std::pow(plan_.q, window.first - 1);
  plan_.periods = window.size() + 2;
  plan_.points = options.grid_points * plan_.periods;
  plan_.periodic = false;

  depth_ = truncation_depth(gen, params, tail_target);
  const kernels::Ladder ladder = choice_ladder(params, plan_, depth_);
  if (ladder.first_row > window.first || ladder.last_row() < window.last) {
    throw std::logic_error("choice ladder does not cover the pattern window");
  }

  grid_ = with_mirror(plan_.abscissae(), plan_.both_signs);
  base_.resize(grid_.size());
  kernels::omp::masked_multiplier_sweep(gen, ladder, 1.0, window.first, window.last, grid_, base_);
  table_.resize(static_cast<std::size_t>(window.size()) * static_cast<std::size_t>(params.N) *
                grid_.size());
  kernels::omp::term_table(gen, ladder, window.first, window.size(), grid_, table_);
}

PatternBounds PatternTable::evaluate(const std::vector<int>& choices) const {
  if (static_cast<int>(choices.size()) != window_.size()) {
    throw std::invalid_argument(
        fmt::format("expected {} choices, got {}", window_.size(), choices.size()));
  }
  for (const int c : choices) {
    if (c < 0 || c >= params_.N) {
      throw std::invalid_argument(fmt::format("choice {} outside [0, {})", c, params_.N));
    }
  }
  const double scale = 1.0 / params_.b;
  std::vector<double> values(grid_.size());
  kernels::omp::table_combine(base_, table_, params_.N, choices, scale, values);

  const WeavingPattern pattern = WeavingPattern::windowed(params_.N, window_.first, choices);
  const kernels::Ladder ladder = pattern_ladder(params_, pattern, plan_, depth_);
  const std::size_t n = static_cast<std::size_t>(plan_.points);
  detail::GridLayout layout{std::span<const double>(grid_.data(), n), false,
                            plan_.period_factor(), true, plan_.both_signs};
  const auto res = detail::search_extremes(
      layout, values, values, options_.refine_points,
      [&](std::span<const double> xs, bool, std::span<double> out) {
        kernels::serial::multiplier_sweep(gen_, ladder, scale, xs, out);
      });
  return {choices, res.min_value, res.max_value, std::max(res.gain_min, res.gain_max)};
}

namespace {

// Running extremes over patterns evaluated in a fixed order.
struct Tally {
  double tolerance = 0.0;
  double L = 0.0;
  double U = 0.0;
  double tail = 0.0;
  double min_A = std::numeric_limits<double>::infinity();
  double max_B = -std::numeric_limits<double>::infinity();
  PatternBounds worst_lower;
  PatternBounds worst_upper;
  int violations = 0;

  void add(const PatternBounds& p) {
    if (p.A < min_A) {
      min_A = p.A;
      worst_lower = p;
    }
    if (p.B > max_B) {
      max_B = p.B;
      worst_upper = p;
    }
    const double tol = tolerance + 2.0 * p.refine_gain + 10.0 * tail;
    if (p.A < L - tol || p.B > U + tol) ++violations;
  }
};

std::optional<double> table_target(const WeaveCertificate& cert, const SweepOptions& options) {
  if (cert.L_weave > 0.0) return 0.5 * options.tail_relative * cert.L_weave;
  return std::nullopt;
}

}  // namespace

SamplingReport sample_patterns(const WaveletGenerator& gen, const SystemParams& params, int count,
                               std::uint64_t seed, IndexRange window,
                               const SweepOptions& options) {
  if (count < 1) throw std::invalid_argument("sample count must be positive");
  require_window(window);
  SamplingReport rep;
  rep.count = count;
  rep.seed = seed;
  rep.window = window;
  rep.certificate = weave_certificate(gen, params, options);
  rep.tolerance = grid_tolerance(rep.certificate);

  const PatternTable table(gen, params, window, options, table_target(rep.certificate, options));
  Tally tally;
  tally.tolerance = rep.tolerance;
  tally.L = rep.certificate.L_weave;
  tally.U = rep.certificate.U_weave;
  tally.tail = table.tail_bound();

  std::mt19937_64 rng(seed);
  const auto n = static_cast<std::uint64_t>(params.N);
  std::vector<int> choices(static_cast<std::size_t>(window.size()));
  rep.patterns.reserve(static_cast<std::size_t>(count));
  for (int s = 0; s < count; ++s) {
    for (int& c : choices) c = static_cast<int>(rng() % n);
    PatternBounds p = table.evaluate(choices);
    tally.add(p);
    rep.patterns.push_back(std::move(p));
  }
  rep.min_A = tally.min_A;
  rep.max_B = tally.max_B;
  rep.worst_lower = tally.worst_lower;
  rep.worst_upper = tally.worst_upper;
  rep.violations = tally.violations;
  rep.all_within = tally.violations == 0;
  return rep;
}

EnumerationReport enumerate_patterns(const WaveletGenerator& gen, const SystemParams& params,
                                     IndexRange window, const SweepOptions& options) {
  params.validate();
  require_window(window);
  const double total = std::pow(static_cast<double>(params.N), window.size());
  if (total > 1e6) {
    throw std::invalid_argument(fmt::format(
        "enumeration needs N^|window| = {}^{} = {:.6g} patterns, budget is 1e6", params.N,
        window.size(), total));
  }
  EnumerationReport rep;
  rep.pattern_count = static_cast<std::uint64_t>(std::llround(total));
  rep.window = window;
  rep.certificate = weave_certificate(gen, params, options);
  rep.tolerance = grid_tolerance(rep.certificate);

  const PatternTable table(gen, params, window, options, table_target(rep.certificate, options));
  Tally tally;
  tally.tolerance = rep.tolerance;
  tally.L = rep.certificate.L_weave;
  tally.U = rep.certificate.U_weave;
  tally.tail = table.tail_bound();

  // Mixed-radix counter, last window position varying fastest.
  std::vector<int> choices(static_cast<std::size_t>(window.size()), 0);
  for (std::uint64_t k = 0; k < rep.pattern_count; ++k) {
    tally.add(table.evaluate(choices));
    for (std::size_t pos = choices.size(); pos-- > 0;) {
      if (++choices[pos] < params.N) break;
      choices[pos] = 0;
    }
  }
  rep.min_A = tally.min_A;
  rep.max_B = tally.max_B;
  rep.worst_lower = tally.worst_lower;
  rep.worst_upper = tally.worst_upper;
  rep.certificate_gap = rep.min_A - rep.certificate.L_weave;
  rep.violations = tally.violations;
  rep.all_within = tally.violations == 0;
  return rep;
}

}  // namespace frameweave
