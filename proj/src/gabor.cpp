#include "frameweave/gabor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "frameweave/detail/search.hpp"
#include "frameweave/errors.hpp"

namespace frameweave {

void GaborSystem::validate() const {
  if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("Gabor a must be > 0");
  if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("Gabor b must be > 0");
  if (N < 1) throw std::invalid_argument("Gabor N must be >= 1");
  if (pattern.order() != N) {
    throw std::invalid_argument(
        fmt::format("pattern order {} does not match N = {}", pattern.order(), N));
  }
  if (truncation && truncation->empty()) {
    throw std::invalid_argument("Gabor truncation range is empty");
  }
}

bool GaborSystem::painless() const { return b <= (1.0 + 1e-12) / gen.length(); }

double GaborSystem::node(long n) const {
  return static_cast<double>(n) * N * a + pattern.choice(static_cast<int>(n)) * a;
}

DensityGate density_gate(double a, double b, int N) {
  if (!(a > 0.0) || !(b > 0.0) || N < 1) {
    throw std::invalid_argument("density_gate needs a > 0, b > 0, N >= 1");
  }
  DensityGate g;
  g.product = a * b * N;
  g.ok = g.product <= 1.0 + 1e-12;
  const char* name = N == 1 ? "ab" : "abN";
  g.message = g.ok ? fmt::format("{} = {:.4g} <= 1", name, g.product)
                   : fmt::format("{} = {:.4g} > 1", name, g.product);
  return g;
}

namespace {

void require_painless(const GaborSystem& sys) {
  sys.validate();
  if (!sys.painless()) {
    throw PreconditionError(fmt::format("b = {} exceeds 1/|I| = {}; modulation cross terms remain",
                                        sys.b, 1.0 / sys.gen.length()));
  }
}

// Translates n with possible overlap at some x in [x0, x1).
void node_span(const GaborSystem& sys, double x0, double x1, long& n_first, long& n_last) {
  const Interval sup = sys.gen.support();
  const double step = sys.N * sys.a;
  n_first = static_cast<long>(std::floor((x0 - sup.hi - (sys.N - 1) * sys.a) / step)) - 1;
  n_last = static_cast<long>(std::ceil((x1 - sup.lo) / step)) + 1;
  if (sys.truncation) {
    n_first = std::max<long>(n_first, sys.truncation->first);
    n_last = std::min<long>(n_last, sys.truncation->last);
  }
}

std::vector<double> nodes_for(const GaborSystem& sys, double x0, double x1) {
  long n_first, n_last;
  node_span(sys, x0, x1, n_first, n_last);
  std::vector<double> nodes;
  for (long n = n_first; n <= n_last; ++n) nodes.push_back(sys.node(n));
  return nodes;
}

struct GaborPlan {
  double x0 = 0.0;
  double x1 = 0.0;
  int points = 0;
  int periods = 1;
  bool periodic = true;
  bool interior_only = false;

  std::vector<double> abscissae() const {
    std::vector<double> xs(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
      xs[static_cast<std::size_t>(i)] = x0 + (x1 - x0) * static_cast<double>(i) / points;
    }
    return xs;
  }
};

GaborPlan plan_gabor(const GaborSystem& sys, int grid_points) {
  if (grid_points < 16) throw std::invalid_argument("grid_points must be at least 16");
  const double step = sys.N * sys.a;
  const Interval sup = sys.gen.support();
  GaborPlan p;
  if (sys.truncation) {
    const IndexRange t = *sys.truncation;
    p.x0 = (t.first - 1) * step + (sys.N - 1) * sys.a + sup.hi;
    p.x1 = (t.last + 1) * step + sup.lo;
    if (!(p.x1 > p.x0)) {
      throw std::invalid_argument(
          fmt::format("truncated Gabor system [{}, {}] has an empty interior", t.first, t.last));
    }
    p.periodic = false;
    p.interior_only = true;
  } else if (sys.pattern.is_periodic()) {
    p.periods = sys.pattern.period();
    p.x0 = 0.0;
    p.x1 = p.periods * step;
    p.points = grid_points * p.periods;
    return p;
  } else {
    const IndexRange w = sys.pattern.window();
    p.x0 = w.first * step + sup.lo - step;
    p.x1 = w.last * step + (sys.N - 1) * sys.a + sup.hi + step;
    p.periodic = false;
  }
  p.periods = std::max(1, static_cast<int>(std::ceil((p.x1 - p.x0) / step - 1e-12)));
  p.points = grid_points * p.periods;
  return p;
}

}  // namespace

double time_multiplier(const GaborSystem& system, double x) {
  require_painless(system);
  long n_first, n_last;
  node_span(system, x, x, n_first, n_last);
  double sum = 0.0;
  for (long n = n_first; n <= n_last; ++n) sum += system.gen.power(x - system.node(n));
  return sum / system.b;
}

Curve gabor_multiplier_curve(const GaborSystem& system, int grid_points) {
  require_painless(system);
  const GaborPlan plan = plan_gabor(system, grid_points);
  const std::vector<double> nodes = nodes_for(system, plan.x0, plan.x1);
  Curve c;
  c.abscissae = plan.abscissae();
  c.values.resize(c.abscissae.size());
  kernels::omp::gabor_sweep(system.gen, nodes, 1.0 / system.b, c.abscissae, c.values);
  return c;
}

BoundsCertificate gabor_frame_bounds(const GaborSystem& system, int grid_points) {
  require_painless(system);
  const GaborPlan plan = plan_gabor(system, grid_points);
  const std::vector<double> nodes = nodes_for(system, plan.x0, plan.x1);
  const double scale = 1.0 / system.b;
  const std::vector<double> xs = plan.abscissae();
  std::vector<double> values(xs.size());
  kernels::omp::gabor_sweep(system.gen, nodes, scale, xs, values);

  detail::GridLayout layout{xs, plan.periodic, plan.x1 - plan.x0, false, false};
  const auto res = detail::search_extremes(
      layout, values, values, 256, [&](std::span<const double> pts, bool, std::span<double> out) {
        kernels::serial::gabor_sweep(system.gen, nodes, scale, pts, out);
      });

  BoundsCertificate cert;
  cert.A_num = res.min_value;
  cert.B_num = res.max_value;
  cert.argmin = res.min_at;
  cert.argmax = res.max_at;
  cert.refine_gain_min = res.gain_min;
  cert.refine_gain_max = res.gain_max;
  cert.grid = {plan.x0, plan.x1, plan.points, plan.periods, false, false};
  cert.tail_bound = 0.0;
  if (system.truncation) {
    cert.j_min_eff = system.truncation->first;
    cert.j_max_eff = system.truncation->last;
  }
  cert.interior_only = plan.interior_only;
  cert.certified = cert.A_num > 0.0;
  return cert;
}

WeaveCertificate gabor_weave_certificate(const GaborGenerator& gen, double a, double b, int N,
                                         int grid_points) {
  GaborSystem sys{gen, a, b, N, WeavingPattern::constant(N, 0), std::nullopt};
  require_painless(sys);
  if (grid_points < 16) throw std::invalid_argument("grid_points must be at least 16");
  const double step = N * a;
  const double scale = 1.0 / b;
  std::vector<double> xs(static_cast<std::size_t>(grid_points));
  for (int i = 0; i < grid_points; ++i) {
    xs[static_cast<std::size_t>(i)] = step * static_cast<double>(i) / grid_points;
  }
  std::vector<double> lo(xs.size()), hi(xs.size());
  kernels::omp::gabor_adversary_sweep(gen, a, N, scale, xs, lo, hi);

  detail::GridLayout layout{xs, true, step, false, false};
  const auto res = detail::search_extremes(
      layout, lo, hi, 256, [&](std::span<const double> pts, bool want_min, std::span<double> out) {
        std::vector<double> other(pts.size());
        if (want_min) {
          kernels::serial::gabor_adversary_sweep(gen, a, N, scale, pts, out, other);
        } else {
          kernels::serial::gabor_adversary_sweep(gen, a, N, scale, pts, other, out);
        }
      });

  WeaveCertificate cert;
  cert.L_weave = res.min_value;
  cert.U_weave = res.max_value;
  cert.argmin = res.min_at;
  cert.argmax = res.max_at;
  cert.refine_gain_min = res.gain_min;
  cert.refine_gain_max = res.gain_max;
  cert.grid = {0.0, step, grid_points, 1, false, false};
  cert.tail_bound = 0.0;

  long n_first, n_last;
  node_span(sys, cert.argmin, cert.argmin, n_first, n_last);
  cert.witness_window = {static_cast<int>(n_first), static_cast<int>(n_last)};
  for (long n = n_first; n <= n_last; ++n) {
    int best = 0;
    double best_v = gen.power(cert.argmin - static_cast<double>(n) * step);
    for (int l = 1; l < N; ++l) {
      const double v = gen.power(cert.argmin - (static_cast<double>(n) * step + l * a));
      if (v < best_v) {
        best_v = v;
        best = l;
      }
    }
    cert.witness_choices.push_back(best);
  }
  cert.certified = cert.L_weave > 0.0;
  return cert;
}

CoverReport verify_cover(const GaborGenerator& gen, double a, int N) {
  if (!(a > 0.0) || N < 1) throw std::invalid_argument("verify_cover needs a > 0, N >= 1");
  CoverReport r;
  r.base_interval = {0.0, a * N};
  r.strengthened_interval = {0.0, (2 * N - 1) * a};
  r.cover = gen.cover_interval();
  r.floor_eps = gen.floor_eps();
  r.base_ok = gen.floor_holds_on(r.base_interval);
  r.strengthened_ok = gen.floor_holds_on(r.strengthened_interval);
  return r;
}

SamplingReport gabor_sample_patterns(const GaborGenerator& gen, double a, double b, int N,
                                     int count, std::uint64_t seed, IndexRange window,
                                     int grid_points) {
  if (count < 1) throw std::invalid_argument("sample count must be positive");
  if (window.empty()) throw std::invalid_argument("pattern window must be non-empty");
  SamplingReport rep;
  rep.count = count;
  rep.seed = seed;
  rep.window = window;
  rep.certificate = gabor_weave_certificate(gen, a, b, N, grid_points);
  rep.tolerance = grid_tolerance(rep.certificate);
  rep.min_A = std::numeric_limits<double>::infinity();
  rep.max_B = -std::numeric_limits<double>::infinity();

  std::mt19937_64 rng(seed);
  const auto n = static_cast<std::uint64_t>(N);
  std::vector<int> choices(static_cast<std::size_t>(window.size()));
  for (int s = 0; s < count; ++s) {
    for (int& c : choices) c = static_cast<int>(rng() % n);
    GaborSystem sys{gen, a, b, N, WeavingPattern::windowed(N, window.first, choices),
                    std::nullopt};
    const BoundsCertificate cert = gabor_frame_bounds(sys, grid_points);
    PatternBounds p{choices, cert.A_num, cert.B_num,
                    std::max(cert.refine_gain_min, cert.refine_gain_max)};
    if (p.A < rep.min_A) {
      rep.min_A = p.A;
      rep.worst_lower = p;
    }
    if (p.B > rep.max_B) {
      rep.max_B = p.B;
      rep.worst_upper = p;
    }
    const double tol = rep.tolerance + 2.0 * p.refine_gain;
    if (p.A < rep.certificate.L_weave - tol || p.B > rep.certificate.U_weave + tol) {
      ++rep.violations;
    }
    rep.patterns.push_back(std::move(p));
  }
  rep.all_within = rep.violations == 0;
  return rep;
}

}  // namespace frameweave
