#include "frameweave/frame_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

#include "frameweave/detail/search.hpp"
#include "frameweave/errors.hpp"

namespace frameweave {

namespace {

constexpr int kEnvelopeGrid = 10000;

int base_index(double q, double abs_gamma) {
  kernels::Ladder l;
  l.q = q;
  return l.base_index(abs_gamma);
}

void require_order(const SystemParams& params, const WeavingPattern& pattern) {
  if (pattern.order() != params.N) {
    throw std::invalid_argument(
        fmt::format("pattern order {} does not match N = {}", pattern.order(), params.N));
  }
}

void require_painless(const WaveletGenerator& gen, const SystemParams& params) {
  if (!is_painless(gen, params)) {
    throw PreconditionError(fmt::format(
        "b = {} exceeds 1/|I| = {}; cross terms do not vanish, use the Gram oracle", params.b,
        admissible_b(gen)));
  }
}

// The analytic lower bound without validating the envelope; only used to
// scale tail targets.
double reference_lower(const WaveletGenerator& gen, const SystemParams& params) {
  try {
    const Envelope& env = gen.envelope();
    const double a = params.a;
    const int N = params.N;
    const int J = static_cast<int>(std::floor(std::log(env.u_radius) / (N * std::log(a))));
    const double A = env.C * env.C * std::pow(a, -2.0 * env.beta * N) /
                     std::pow(a, 2.0 * env.beta * (N - 1 - N * J)) / params.b;
    if (std::isfinite(A) && A > 0.0) return A;
  } catch (...) {
  }
  return gen.sup_norm() * gen.sup_norm() / params.b;
}

void check_sweep_generator(const WaveletGenerator& gen) {
  if (gen.inner_radius() > 0.0) return;
  if (gen(0.0) != 0.0) {
    throw std::invalid_argument("generator does not vanish at 0; the multiplier diverges");
  }
  if (!validate_envelope(gen, kEnvelopeGrid).upper_ok) {
    throw std::invalid_argument("upper envelope D|γ|^α fails; truncation tail cannot be bounded");
  }
}

}  // namespace

double grid_tolerance(const BoundsCertificate& cert) {
  return 2.0 * std::max(cert.refine_gain_min, cert.refine_gain_max) + 10.0 * cert.tail_bound +
         1e-9 * std::max(1.0, std::abs(cert.B_num));
}

double admissible_b(const WaveletGenerator& gen) {
  const double len = gen.support().length();
  if (!std::isfinite(len) || !(len > 0.0)) {
    throw std::invalid_argument("generator support must be a bounded interval");
  }
  return 1.0 / len;
}

bool is_painless(const WaveletGenerator& gen, const SystemParams& params) {
  return params.b <= admissible_b(gen) * (1.0 + 1e-12);
}

TruncationDepth truncation_depth(const WaveletGenerator& gen, const SystemParams& params,
                                 std::optional<double> tail_target) {
  params.validate();
  const double log_a = std::log(params.a);
  const int N = params.N;
  TruncationDepth d;
  // Rows with a^(Nj+N-1) < |γ|/R vanish on the support.
  d.below = static_cast<int>(std::ceil((std::log(gen.outer_radius()) / log_a + N - 1) / N)) + 1;

  const double r_in = gen.inner_radius();
  if (r_in > 0.0) {
    d.above = std::max(static_cast<int>(std::ceil(-std::log(r_in) / (N * log_a))) + 1, -d.below);
    d.tail_bound = 0.0;
    return d;
  }

  const Envelope& env = gen.envelope();
  const double target = tail_target.value_or(1e-12 * reference_lower(gen, params));
  if (!(target > 0.0)) throw std::invalid_argument("tail target must be positive");
  const double ratio = std::pow(params.a, -2.0 * env.alpha * N);
  const int need_u = static_cast<int>(std::ceil(-std::log(env.u_radius) / (N * log_a)));
  const double lead = env.D * env.D / (params.b * (1.0 - ratio));
  const int need_tail =
      static_cast<int>(std::ceil(std::log(lead / target) / (2.0 * env.alpha * N * log_a)));
  d.above = std::max({need_u, need_tail, -d.below});
  d.tail_bound = tail_bound_for_depth(gen, params, d.above);
  return d;
}

double tail_bound_for_depth(const WaveletGenerator& gen, const SystemParams& params, int above) {
  params.validate();
  const double log_a = std::log(params.a);
  const int N = params.N;
  const double r_in = gen.inner_radius();
  if (r_in > 0.0) {
    // |γ|/λ_j < a^(-N·above) ≤ r_in for every skipped row.
    return std::pow(params.a, -static_cast<double>(N) * above) <= r_in
               ? 0.0
               : std::numeric_limits<double>::infinity();
  }
  const Envelope& env = gen.envelope();
  if (-N * above * log_a > std::log(env.u_radius)) return std::numeric_limits<double>::infinity();
  const double ratio = std::pow(params.a, -2.0 * env.alpha * N);
  return env.D * env.D * std::pow(params.a, -2.0 * env.alpha * N * above) /
         (params.b * (1.0 - ratio));
}

TruncationLevel truncation_level(const WaveletGenerator& gen, const SystemParams& params,
                                 const WeavingPattern& pattern, Interval gamma_range,
                                 std::optional<double> tail_target) {
  require_order(params, pattern);
  double lo = gamma_range.lo;
  double hi = gamma_range.hi;
  if (hi < lo) std::swap(lo, hi);
  if (lo <= 0.0 && hi >= 0.0) {
    throw std::invalid_argument("gamma range must exclude 0 (pass the range of |γ|)");
  }
  if (hi < 0.0) {
    const double t = -hi;
    hi = -lo;
    lo = t;
  }
  const TruncationDepth d = truncation_depth(gen, params, tail_target);
  const double q = std::pow(params.a, params.N);
  return {base_index(q, lo) - d.below, base_index(q, hi) + d.above, d.tail_bound};
}

double multiplier_for_dilations(const WaveletGenerator& gen, double b,
                                std::span<const double> lambdas, double gamma) {
  if (!(b > 0.0)) throw std::invalid_argument("b must be > 0");
  double sum = 0.0;
  for (const double l : lambdas) {
    if (!(l > 0.0)) throw std::invalid_argument("dilations must be positive");
    sum += gen.power(gamma / l);
  }
  return sum / b;
}

std::vector<double> SweepPlan::abscissae() const {
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    g[static_cast<std::size_t>(i)] =
        lo * std::pow(q, static_cast<double>(i) * periods / static_cast<double>(points));
  }
  return g;
}

double SweepPlan::period_factor() const { return std::pow(q, periods); }

SweepPlan plan_period(const WaveletGenerator& gen, const SystemParams& params, int grid_points) {
  params.validate();
  if (grid_points < 16) throw std::invalid_argument("grid_points must be at least 16");
  SweepPlan p;
  p.q = std::pow(params.a, params.N);
  p.lo = gen.outer_radius();
  p.periods = 1;
  p.points = grid_points;
  p.periodic = true;
  p.both_signs = !gen.is_even();
  return p;
}

SweepPlan plan_sweep(const WaveletGenerator& gen, const SystemParams& params,
                     const WeavingPattern& pattern, int grid_points) {
  require_order(params, pattern);
  SweepPlan p = plan_period(gen, params, grid_points);
  if (pattern.is_periodic()) {
    p.periods = pattern.period();
  } else {
    const IndexRange w = pattern.window();
    p.lo = gen.outer_radius() * std::pow(p.q, w.first - 1);
    p.periods = w.size() + 2;
    p.periodic = false;
  }
  p.points = grid_points * p.periods;
  return p;
}

namespace {

IndexRange ladder_rows(const SweepPlan& plan, const TruncationDepth& depth) {
  // One extra period on each side for refinement neighbourhoods.
  const double lo = plan.lo / plan.q;
  const double hi = plan.lo * plan.period_factor() * plan.q;
  return {base_index(plan.q, lo) - depth.below, base_index(plan.q, hi) + depth.above};
}

}  // namespace

kernels::Ladder pattern_ladder(const SystemParams& params, const WeavingPattern& pattern,
                               const SweepPlan& plan, const TruncationDepth& depth) {
  const IndexRange rows = ladder_rows(plan, depth);
  return kernels::make_ladder(params.a, params.N, rows.first, rows.size(), 1, depth.below,
                              depth.above, [&](int j, int) { return pattern.choice(j); });
}

kernels::Ladder choice_ladder(const SystemParams& params, const SweepPlan& plan,
                              const TruncationDepth& depth) {
  const IndexRange rows = ladder_rows(plan, depth);
  return kernels::make_ladder(params.a, params.N, rows.first, rows.size(), params.N, depth.below,
                              depth.above, [](int, int c) { return c; });
}

double multiplier(const WaveletGenerator& gen, const SystemParams& params,
                  const WeavingPattern& pattern, double gamma) {
  params.validate();
  require_order(params, pattern);
  require_painless(gen, params);
  const TruncationDepth d = truncation_depth(gen, params);
  const double g = std::abs(gamma);
  if (g == 0.0) return gen.power(0.0) == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  const double q = std::pow(params.a, params.N);
  const int j0 = base_index(q, g);
  const kernels::Ladder ladder =
      kernels::make_ladder(params.a, params.N, j0 - d.below, d.below + d.above + 1, 1, d.below,
                           d.above, [&](int j, int) { return pattern.choice(j); });
  double out = 0.0;
  kernels::serial::multiplier_sweep(gen, ladder, 1.0 / params.b, std::span<const double>(&gamma, 1),
                                    std::span<double>(&out, 1));
  return out;
}

double cross_term_sum(const WaveletGenerator& gen, const SystemParams& params,
                      const WeavingPattern& pattern, double gamma, int k_max) {
  params.validate();
  require_order(params, pattern);
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  IndexRange rows = pattern.window();
  const double g = std::abs(gamma);
  if (g != 0.0) {
    const TruncationDepth d = truncation_depth(gen, params);
    const int j0 = base_index(std::pow(params.a, params.N), g);
    const IndexRange eff{j0 - d.below, j0 + d.above};
    rows = rows.empty() ? eff
                        : IndexRange{std::min(rows.first, eff.first), std::max(rows.last, eff.last)};
  }
  double sum = 0.0;
  for (int j = rows.first; j <= rows.last; ++j) {
    const double lambda =
        std::pow(params.a, static_cast<double>(params.N) * j + pattern.choice(j));
    const double x = gamma / lambda;
    const double v = gen(x);
    if (v == 0.0) continue;
    for (int k = 1; k <= k_max; ++k) {
      sum += std::abs(v * gen(x + k / params.b));
      sum += std::abs(v * gen(x - k / params.b));
    }
  }
  return sum;
}

AnalyticBounds analytic_bounds(const WaveletGenerator& gen, const SystemParams& params) {
  params.validate();
  require_painless(gen, params);
  const Envelope& env = gen.envelope();
  if (!(env.u_radius > 0.0) || !std::isfinite(env.u_radius)) {
    throw std::invalid_argument("degenerate neighbourhood U; no valid J");
  }
  const EnvelopeReport rep = validate_envelope(gen, kEnvelopeGrid);
  if (!rep.passed()) {
    throw std::invalid_argument(
        fmt::format("envelope validation failed (lower ok: {}, upper ok: {})", rep.lower_ok,
                    rep.upper_ok));
  }
  const double a = params.a;
  const int N = params.N;
  AnalyticBounds out;
  int J = static_cast<int>(std::floor(std::log(env.u_radius) / (N * std::log(a))));
  while (std::pow(a, static_cast<double>(N) * (J + 1)) <= env.u_radius) ++J;
  while (std::pow(a, static_cast<double>(N) * J) > env.u_radius) --J;
  out.J = J;

  const Interval sup = gen.support();
  int K = 0;
  for (int k = 1; k <= 100000; ++k) {
    const double lo = std::pow(a, static_cast<double>(N) * (J - 1 + k));
    const double hi = std::pow(a, static_cast<double>(N) * (J + k));
    const bool pos_hits = lo <= sup.hi && hi >= sup.lo;
    const bool neg_hits = -hi <= sup.hi && -lo >= sup.lo;
    if (!pos_hits && !neg_hits) {
      K = k;
      break;
    }
  }
  if (K == 0) throw std::invalid_argument("no K found: support too large for the dilation base");
  out.K = K;

  const double inv_b = 1.0 / params.b;
  out.A = inv_b * env.C * env.C * std::pow(a, -2.0 * env.beta * N) /
          std::pow(a, 2.0 * env.beta * (N - 1 - N * J));
  out.B = inv_b * (env.D * env.D * std::pow(a, 2.0 * env.alpha * N * J) /
                       (1.0 - std::pow(a, -2.0 * env.alpha * N)) +
                   K * gen.sup_norm() * gen.sup_norm());
  return out;
}

Curve multiplier_curve(const WaveletGenerator& gen, const SystemParams& params,
                       const WeavingPattern& pattern, int grid_points) {
  params.validate();
  require_painless(gen, params);
  check_sweep_generator(gen);
  const SweepPlan plan = plan_sweep(gen, params, pattern, grid_points);
  const TruncationDepth depth = truncation_depth(gen, params);
  const kernels::Ladder ladder = pattern_ladder(params, pattern, plan, depth);
  Curve c;
  c.abscissae = plan.abscissae();
  if (plan.both_signs) {
    const std::size_t n = c.abscissae.size();
    for (std::size_t i = 0; i < n; ++i) c.abscissae.push_back(-c.abscissae[i]);
  }
  c.values.resize(c.abscissae.size());
  kernels::omp::multiplier_sweep(gen, ladder, 1.0 / params.b, c.abscissae, c.values);
  return c;
}

BoundsCertificate frame_bounds(const WaveletGenerator& gen, const SystemParams& params,
                               const WeavingPattern& pattern, int grid_points) {
  SweepOptions opts;
  opts.grid_points = grid_points;
  return frame_bounds(gen, params, pattern, opts);
}

namespace {

BoundsCertificate sweep_bounds(const WaveletGenerator& gen, const SystemParams& params,
                               const WeavingPattern& pattern, const SweepOptions& opts,
                               const TruncationDepth& depth) {
  const SweepPlan plan = plan_sweep(gen, params, pattern, opts.grid_points);
  const kernels::Ladder ladder = pattern_ladder(params, pattern, plan, depth);
  const double scale = 1.0 / params.b;

  const std::vector<double> grid = plan.abscissae();
  std::vector<double> abscissae = grid;
  if (plan.both_signs) {
    for (const double g : grid) abscissae.push_back(-g);
  }
  std::vector<double> values(abscissae.size());
  kernels::omp::multiplier_sweep(gen, ladder, scale, abscissae, values);

  detail::GridLayout layout{grid, plan.periodic, plan.period_factor(), true, plan.both_signs};
  const auto res = detail::search_extremes(
      layout, values, values, opts.refine_points,
      [&](std::span<const double> xs, bool, std::span<double> out) {
        kernels::serial::multiplier_sweep(gen, ladder, scale, xs, out);
      });

  BoundsCertificate cert;
  cert.A_num = res.min_value;
  cert.B_num = res.max_value;
  cert.argmin = res.min_at;
  cert.argmax = res.max_at;
  cert.refine_gain_min = res.gain_min;
  cert.refine_gain_max = res.gain_max;
  cert.grid = {plan.lo, plan.lo * plan.period_factor(), plan.points, plan.periods, true,
               plan.both_signs};
  cert.tail_bound = depth.tail_bound;
  cert.j_min_eff = base_index(plan.q, plan.lo) - depth.below;
  cert.j_max_eff = base_index(plan.q, plan.lo * plan.period_factor()) + depth.above;
  return cert;
}

}  // namespace

void detail::check_sweep_inputs(const WaveletGenerator& gen, const SystemParams& params,
                                const SweepOptions& options) {
  params.validate();
  require_painless(gen, params);
  if (options.grid_points < 16) throw std::invalid_argument("grid_points must be at least 16");
  if (options.refine_points < 0) throw std::invalid_argument("refine_points must be >= 0");
  if (!(options.tail_relative > 0.0)) throw std::invalid_argument("tail_relative must be > 0");
  check_sweep_generator(gen);
}

BoundsCertificate frame_bounds(const WaveletGenerator& gen, const SystemParams& params,
                               const WeavingPattern& pattern, const SweepOptions& options) {
  require_order(params, pattern);
  detail::check_sweep_inputs(gen, params, options);

  TruncationDepth depth = truncation_depth(gen, params);
  BoundsCertificate cert = sweep_bounds(gen, params, pattern, options, depth);
  if (cert.A_num > 0.0 && cert.tail_bound > options.tail_relative * cert.A_num) {
    depth = truncation_depth(gen, params, 0.5 * options.tail_relative * cert.A_num);
    cert = sweep_bounds(gen, params, pattern, options, depth);
  }
  try {
    const AnalyticBounds ab = analytic_bounds(gen, params);
    cert.A_analytic = ab.A;
    cert.B_analytic = ab.B;
    cert.J_const = ab.J;
    cert.K_const = ab.K;
  } catch (const std::invalid_argument&) {
    // Envelope claims do not hold; the numerical bounds stand alone.
  }
  cert.certified = cert.A_num > cert.tail_bound;
  return cert;
}

}  // namespace frameweave
