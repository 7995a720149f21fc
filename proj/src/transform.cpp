#include "frameweave/transform.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>
#include <fmt/format.h>
#include <unsupported/Eigen/FFT>

#include "frameweave/errors.hpp"

namespace frameweave {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr long kMaxPeriod = 1L << 24;

// e^(−2πi x), reduced mod 1 in extended precision first.
cplx unit_phase(long double x) {
  const long double frac = x - std::nearbyint(x);
  return std::polar(1.0, -kTwoPi * static_cast<double>(frac));
}

double dilation(const SystemParams& params, const WeavingPattern& pattern, int j) {
  return std::pow(params.a, static_cast<double>(params.N) * j + pattern.choice(j));
}

void require_same_grid(const FreqGrid& a, const FreqGrid& b) {
  if (a.size != b.size || a.step != b.step || a.lo != b.lo) {
    throw std::invalid_argument("signals live on different grids");
  }
}

double grid_radius(const FreqGrid& g) { return std::max(std::abs(g.lo), std::abs(g.hi())); }

FreqSignal zeros_like(const FreqGrid& grid) {
  return {grid, std::vector<cplx>(static_cast<std::size_t>(grid.size), cplx(0.0, 0.0))};
}

}  // namespace

void FreqGrid::validate() const {
  if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("grid step must be > 0");
  if (size < 2) throw std::invalid_argument("grid needs at least 2 nodes");
}

FreqGrid FreqGrid::symmetric(double half_width, int intervals) {
  if (!(half_width > 0.0) || intervals < 1) {
    throw std::invalid_argument("symmetric grid needs half_width > 0 and intervals >= 1");
  }
  return {-half_width, 2.0 * half_width / intervals, intervals + 1};
}

FreqGrid default_grid(const WaveletGenerator& gen, const SystemParams& params, int J_hi,
                      int intervals) {
  params.validate();
  return FreqGrid::symmetric(gen.outer_radius() * std::pow(params.a, params.N * J_hi), intervals);
}

void FreqSignal::validate() const {
  grid.validate();
  if (values.size() != static_cast<std::size_t>(grid.size)) {
    throw std::invalid_argument(
        fmt::format("signal has {} values on a {}-node grid", values.size(), grid.size));
  }
}

double FreqSignal::energy() const {
  double e = 0.0;
  for (int i = 0; i < grid.size; ++i) e += grid.weight(i) * std::norm(values[static_cast<std::size_t>(i)]);
  return e;
}

double FreqSignal::norm() const { return std::sqrt(energy()); }

std::string FreqSignal::to_csv() const {
  std::string out = "gamma,re,im\n";
  char buf[96];
  for (int i = 0; i < grid.size; ++i) {
    const cplx v = values[static_cast<std::size_t>(i)];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", grid.gamma(i), v.real(), v.imag());
    out += buf;
  }
  return out;
}

FreqSignal FreqSignal::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<double> g;
  std::vector<cplx> v;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    if (line_no == 1 && line.rfind("gamma", 0) == 0) continue;
    double x, re, im;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &re, &im) != 3) {
      throw std::invalid_argument(fmt::format("signal CSV line {}: expected gamma,re,im", line_no));
    }
    g.push_back(x);
    v.emplace_back(re, im);
  }
  if (g.size() < 2) throw std::invalid_argument("signal CSV needs at least 2 rows");
  FreqSignal s;
  s.grid.lo = g.front();
  s.grid.size = static_cast<int>(g.size());
  s.grid.step = (g.back() - g.front()) / (s.grid.size - 1);
  s.grid.validate();
  for (int i = 0; i < s.grid.size; ++i) {
    if (std::abs(g[static_cast<std::size_t>(i)] - s.grid.gamma(i)) >
        1e-9 * (std::abs(s.grid.gamma(i)) + s.grid.step)) {
      throw std::invalid_argument(fmt::format("signal CSV row {} breaks the uniform grid", i + 1));
    }
  }
  s.values = std::move(v);
  return s;
}

FreqSignal random_bump_signal(const FreqGrid& grid, double R, double a, int m_lo, int m_hi,
                              std::uint64_t seed) {
  grid.validate();
  if (!(R > 0.0) || !(a > 1.0) || m_hi < m_lo) {
    throw std::invalid_argument("random_bump_signal needs R > 0, a > 1, m_lo <= m_hi");
  }
  if (R * std::pow(a, m_hi + 1) > grid_radius(grid)) {
    throw std::invalid_argument("bump cells extend past the grid");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const std::size_t cells = static_cast<std::size_t>(m_hi - m_lo + 1);
  std::vector<cplx> pos(cells), neg(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    pos[c] = {normal(rng), normal(rng)};
    neg[c] = {normal(rng), normal(rng)};
  }
  FreqSignal f = zeros_like(grid);
  const double log_a = std::log(a);
  for (int i = 0; i < grid.size; ++i) {
    const double gm = grid.gamma(i);
    if (gm == 0.0) continue;
    const double s = std::log(std::abs(gm) / R) / log_a;
    const double m = std::floor(s);
    const double t = s - m;
    if (m < m_lo || m > m_hi || !(t > 0.0 && t < 1.0)) continue;
    const double bump = std::exp(1.0 - 1.0 / (4.0 * t * (1.0 - t)));
    const std::size_t c = static_cast<std::size_t>(m - m_lo);
    f.values[static_cast<std::size_t>(i)] = (gm > 0.0 ? pos[c] : neg[c]) * bump;
  }
  return f;
}

FreqSignal atom_spectrum(const WaveletGenerator& gen, const SystemParams& params,
                         const WeavingPattern& pattern, int j, long k, const FreqGrid& grid) {
  params.validate();
  grid.validate();
  const double lambda = dilation(params, pattern, j);
  const double amp = 1.0 / std::sqrt(lambda);
  const long double rate = static_cast<long double>(k) * params.b / lambda;
  FreqSignal s = zeros_like(grid);
  for (int i = 0; i < grid.size; ++i) {
    const double gm = grid.gamma(i);
    const double p = gen(gm / lambda);
    if (p != 0.0) s.values[static_cast<std::size_t>(i)] = amp * p * unit_phase(rate * gm);
  }
  return s;
}

double CoefficientTable::energy() const {
  double e = 0.0;
  for (const auto& r : rows) {
    for (const cplx c : r.coeffs) e += std::norm(c);
  }
  return e;
}

namespace {

// Discrete k-period λ/(b·step) when it is an integer, else 0.
long discrete_period(double lambda, double b, double step) {
  const double L = lambda / (b * step);
  const double Lr = std::nearbyint(L);
  if (Lr >= 1.0 && std::abs(L - Lr) <= 1e-9 * L) return static_cast<long>(Lr);
  return 0;
}

}  // namespace

CoefficientTable analysis(const WaveletGenerator& gen, const SystemParams& params,
                          const WeavingPattern& pattern, const FreqSignal& f, IndexRange j_range,
                          std::optional<std::pair<long, long>> k_range) {
  params.validate();
  f.validate();
  if (!is_painless(gen, params)) {
    throw PreconditionError(fmt::format("b = {} exceeds 1/|I| = {}", params.b, admissible_b(gen)));
  }
  if (j_range.empty()) throw std::invalid_argument("empty j range");
  if (k_range && k_range->second < k_range->first) throw std::invalid_argument("empty k range");
  const FreqGrid& grid = f.grid;
  const auto n = static_cast<std::size_t>(grid.size);

  CoefficientTable table;
  table.grid = grid;
  table.j_range = j_range;
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);

  for (int j = j_range.first; j <= j_range.last; ++j) {
    const double lambda = dilation(params, pattern, j);
    const double amp = 1.0 / std::sqrt(lambda);
    if (lambda * gen.outer_radius() > grid_radius(grid)) {
      table.warnings.push_back(fmt::format("row {}: atom spectrum exceeds the grid range", j));
    }
    std::vector<cplx> F(n);
    for (std::size_t i = 0; i < n; ++i) {
      const int ii = static_cast<int>(i);
      F[i] = grid.weight(ii) * f.values[i] * gen(grid.gamma(ii) / lambda);
    }

    CoefficientRow row;
    row.j = j;
    row.lambda = lambda;
    const long L = k_range ? 0 : discrete_period(lambda, params.b, grid.step);
    if (L > kMaxPeriod) {
      throw std::invalid_argument(
          fmt::format("row {}: discrete period {} is too large; narrow the j range", j, L));
    }
    if (L > 0) {
      std::vector<cplx> G(static_cast<std::size_t>(L), cplx(0.0, 0.0));
      for (std::size_t i = 0; i < n; ++i) G[i % static_cast<std::size_t>(L)] += F[i];
      std::vector<cplx> D;
      fft.inv(D, G);  // D_k = Σ_r G_r e^(+2πi k r / L)
      row.full_period = true;
      row.k_first = -(L / 2);
      row.coeffs.resize(static_cast<std::size_t>(L));
      const long double shift = static_cast<long double>(params.b) * grid.lo / lambda;
      for (long t = 0; t < L; ++t) {
        const long k = row.k_first + t;
        const long idx = ((k % L) + L) % L;
        row.coeffs[static_cast<std::size_t>(t)] =
            amp * std::conj(unit_phase(shift * k)) * D[static_cast<std::size_t>(idx)];
      }
    } else {
      long k_lo, k_hi;
      if (k_range) {
        k_lo = k_range->first;
        k_hi = k_range->second;
      } else {
        const double Lf = lambda / (params.b * grid.step);
        if (Lf > static_cast<double>(kMaxPeriod)) {
          throw std::invalid_argument(fmt::format("row {}: k period too large", j));
        }
        const long half = static_cast<long>(std::ceil(Lf / 2.0));
        k_lo = -half;
        k_hi = half - 1;
        table.warnings.push_back(fmt::format(
            "row {}: lambda/(b*step) = {:.6g} is not an integer; k range is not a full period", j,
            Lf));
      }
      row.k_first = k_lo;
      for (long k = k_lo; k <= k_hi; ++k) {
        const long double rate = static_cast<long double>(k) * params.b / lambda;
        cplx c(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
          if (F[i] != cplx(0.0, 0.0)) c += F[i] * std::conj(unit_phase(rate * grid.gamma(static_cast<int>(i))));
        }
        row.coeffs.push_back(amp * c);
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

FreqSignal synthesis(const WaveletGenerator& gen, const SystemParams& params,
                     const WeavingPattern& pattern, const CoefficientTable& table,
                     const FreqGrid& grid) {
  params.validate();
  grid.validate();
  const auto n = static_cast<std::size_t>(grid.size);
  const bool same_grid =
      grid.size == table.grid.size && grid.step == table.grid.step && grid.lo == table.grid.lo;
  FreqSignal out = zeros_like(grid);
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);

  for (const auto& row : table.rows) {
    const double lambda = dilation(params, pattern, row.j);
    const double amp = 1.0 / std::sqrt(lambda);
    const long L = static_cast<long>(row.coeffs.size());
    if (row.full_period && same_grid) {
      std::vector<cplx> d(static_cast<std::size_t>(L));
      const long double shift = static_cast<long double>(params.b) * grid.lo / lambda;
      for (long t = 0; t < L; ++t) {
        const long k = row.k_first + t;
        const long idx = ((k % L) + L) % L;
        d[static_cast<std::size_t>(idx)] = row.coeffs[static_cast<std::size_t>(t)] * unit_phase(shift * k);
      }
      std::vector<cplx> E;
      fft.fwd(E, d);  // E_r = Σ_k d_k e^(−2πi k r / L)
      for (std::size_t i = 0; i < n; ++i) {
        const double p = gen(grid.gamma(static_cast<int>(i)) / lambda);
        if (p != 0.0) out.values[i] += amp * p * E[i % static_cast<std::size_t>(L)];
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        const double gm = grid.gamma(static_cast<int>(i));
        const double p = gen(gm / lambda);
        if (p == 0.0) continue;
        cplx acc(0.0, 0.0);
        for (long t = 0; t < L; ++t) {
          const long double rate = static_cast<long double>(row.k_first + t) * params.b / lambda;
          acc += row.coeffs[static_cast<std::size_t>(t)] * unit_phase(rate * gm);
        }
        out.values[i] += amp * p * acc;
      }
    }
  }
  return out;
}

std::vector<double> multiplier_on_grid(const WaveletGenerator& gen, const SystemParams& params,
                                       const WeavingPattern& pattern, const FreqGrid& grid) {
  detail::check_sweep_inputs(gen, params, SweepOptions{});
  grid.validate();
  if (pattern.order() != params.N) throw std::invalid_argument("pattern order does not match N");
  const TruncationDepth depth = truncation_depth(gen, params);
  const double q = std::pow(params.a, params.N);
  kernels::Ladder probe;
  probe.q = q;
  double g_min = std::numeric_limits<double>::infinity();
  double g_max = 0.0;
  std::vector<double> gammas(static_cast<std::size_t>(grid.size));
  for (int i = 0; i < grid.size; ++i) {
    const double g = grid.gamma(i);
    gammas[static_cast<std::size_t>(i)] = g;
    if (g != 0.0) {
      g_min = std::min(g_min, std::abs(g));
      g_max = std::max(g_max, std::abs(g));
    }
  }
  std::vector<double> out(gammas.size(), 0.0);
  if (g_max == 0.0) return out;
  const int first = probe.base_index(g_min) - depth.below;
  const int last = probe.base_index(g_max) + depth.above;
  const kernels::Ladder ladder =
      kernels::make_ladder(params.a, params.N, first, last - first + 1, 1, depth.below,
                           depth.above, [&](int j, int) { return pattern.choice(j); });
  kernels::omp::multiplier_sweep(gen, ladder, 1.0 / params.b, gammas, out);
  return out;
}

std::vector<double> truncated_multiplier(const WaveletGenerator& gen, const SystemParams& params,
                                         const WeavingPattern& pattern, const FreqGrid& grid,
                                         IndexRange j_range) {
  params.validate();
  grid.validate();
  std::vector<double> out(static_cast<std::size_t>(grid.size), 0.0);
  for (int j = j_range.first; j <= j_range.last; ++j) {
    const double lambda = dilation(params, pattern, j);
    for (int i = 0; i < grid.size; ++i) {
      out[static_cast<std::size_t>(i)] += gen.power(grid.gamma(i) / lambda);
    }
  }
  for (double& v : out) v /= params.b;
  return out;
}

IndexRange fitting_rows(const WaveletGenerator& gen, const SystemParams& params,
                        const WeavingPattern& pattern, const FreqSignal& f) {
  params.validate();
  f.validate();
  double s_min = std::numeric_limits<double>::infinity();
  double s_max = 0.0;
  for (int i = 0; i < f.grid.size; ++i) {
    if (f.values[static_cast<std::size_t>(i)] == cplx(0.0, 0.0)) continue;
    const double g = std::abs(f.grid.gamma(i));
    s_min = std::min(s_min, g);
    s_max = std::max(s_max, g);
  }
  if (!(s_max > 0.0)) throw std::invalid_argument("signal has no support away from 0");
  const double R = gen.outer_radius();
  const double r_in = gen.inner_radius();
  const double H = grid_radius(f.grid);
  const double q = std::pow(params.a, params.N);
  const int j_lo = static_cast<int>(std::floor(std::log(s_min / R) / std::log(q))) - 2;
  const int j_hi = static_cast<int>(std::ceil(std::log(H / R) / std::log(q))) + 2;
  IndexRange rows{0, -1};
  for (int j = j_lo; j <= j_hi; ++j) {
    const double lambda = dilation(params, pattern, j);
    const bool fits = lambda * R <= H;
    const bool meets = lambda * R > s_min && lambda * r_in < s_max;
    if (!fits || !meets) continue;
    if (rows.empty()) rows.first = j;
    rows.last = j;
  }
  if (rows.empty()) throw std::invalid_argument("no atom row both fits the grid and meets the signal");
  return rows;
}

ReconstructResult reconstruct_painless(const WaveletGenerator& gen, const SystemParams& params,
                                       const WeavingPattern& pattern, const FreqSignal& f,
                                       ApplyMode mode) {
  params.validate();
  f.validate();
  if (!is_painless(gen, params)) {
    throw PreconditionError(fmt::format("b = {} exceeds 1/|I| = {}", params.b, admissible_b(gen)));
  }
  ReconstructResult res;
  std::vector<double> m;
  FreqSignal Sf = zeros_like(f.grid);
  if (mode == ApplyMode::Pointwise) {
    m = multiplier_on_grid(gen, params, pattern, f.grid);
  } else {
    res.j_range = fitting_rows(gen, params, pattern, f);
    m = truncated_multiplier(gen, params, pattern, f.grid, res.j_range);
  }
  const double tail = truncation_depth(gen, params).tail_bound;

  res.min_multiplier_on_support = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (f.values[i] != cplx(0.0, 0.0)) {
      res.min_multiplier_on_support = std::min(res.min_multiplier_on_support, m[i]);
    }
  }
  if (!(res.min_multiplier_on_support > tail)) {
    throw NotInvertibleError(fmt::format(
        "multiplier drops to {:.3g} on the signal support (tail bound {:.3g})",
        res.min_multiplier_on_support, tail));
  }

  if (mode == ApplyMode::Pointwise) {
    for (std::size_t i = 0; i < m.size(); ++i) Sf.values[i] = m[i] * f.values[i];
  } else {
    Sf = synthesis(gen, params, pattern, analysis(gen, params, pattern, f, res.j_range), f.grid);
  }

  res.signal = zeros_like(f.grid);
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] > tail) res.signal.values[i] = Sf.values[i] / m[i];
  }
  FreqSignal diff = zeros_like(f.grid);
  for (std::size_t i = 0; i < m.size(); ++i) diff.values[i] = res.signal.values[i] - f.values[i];
  const double nf = f.norm();
  res.relative_error = nf > 0.0 ? diff.norm() / nf : diff.norm();
  return res;
}

ErasureReport erasure_experiment(const WaveletGenerator& gen, const SystemParams& params,
                                 const FreqSignal& f, const std::vector<int>& erased,
                                 const WeavingPattern& fallback, std::optional<int> erased_period,
                                 int grid_points) {
  params.validate();
  if (fallback.order() != params.N) throw std::invalid_argument("fallback order does not match N");
  ErasureReport rep;
  rep.erased = erased;
  std::sort(rep.erased.begin(), rep.erased.end());
  rep.erased.erase(std::unique(rep.erased.begin(), rep.erased.end()), rep.erased.end());
  rep.erased_period = erased_period;

  auto is_erased = [&](int j) {
    if (erased_period) {
      const int r = ((j % *erased_period) + *erased_period) % *erased_period;
      return std::binary_search(rep.erased.begin(), rep.erased.end(), r);
    }
    return std::binary_search(rep.erased.begin(), rep.erased.end(), j);
  };

  if (rep.erased.empty()) {
    rep.mixed = WeavingPattern::constant(params.N, 0);
  } else if (erased_period) {
    const int p = *erased_period;
    if (p < 1) throw std::invalid_argument("erased_period must be >= 1");
    for (const int r : rep.erased) {
      if (r < 0 || r >= p) throw std::invalid_argument("erased residues must lie in [0, period)");
    }
    if (!fallback.is_periodic()) throw std::invalid_argument("periodic erasure needs a periodic fallback");
    const int P = std::lcm(p, fallback.period());
    const int first = fallback.extension() == Extension::Periodic ? fallback.window().first : 0;
    std::vector<int> choices(static_cast<std::size_t>(P), 0);
    for (int t = 0; t < P; ++t) {
      if (is_erased(first + t)) choices[static_cast<std::size_t>(t)] = fallback.choice(first + t);
    }
    rep.mixed = WeavingPattern::windowed(params.N, first, choices, Extension::Periodic);
  } else {
    const int first = rep.erased.front();
    std::vector<int> choices(static_cast<std::size_t>(rep.erased.back() - first + 1), 0);
    for (const int j : rep.erased) choices[static_cast<std::size_t>(j - first)] = fallback.choice(j);
    rep.mixed = WeavingPattern::windowed(params.N, first, choices);
  }
  for (const int e : rep.erased) {
    if (fallback.choice(e) == 0) {
      throw std::invalid_argument(
          fmt::format("fallback assigns the erased family 0 to index {}", e));
    }
  }

  rep.relative_error = reconstruct_painless(gen, params, rep.mixed, f).relative_error;
  SweepOptions opts;
  opts.grid_points = grid_points;
  rep.bounds = frame_bounds(gen, params, rep.mixed, opts);
  rep.certificate = weave_certificate(gen, params, opts);
  rep.bounds.L_weave = rep.certificate.L_weave;
  rep.bounds.U_weave = rep.certificate.U_weave;
  rep.tolerance = std::max(grid_tolerance(rep.bounds), grid_tolerance(rep.certificate));
  rep.within_certificate = rep.bounds.A_num >= rep.certificate.L_weave - rep.tolerance &&
                           rep.bounds.B_num <= rep.certificate.U_weave + rep.tolerance;
  return rep;
}

namespace {

Eigen::MatrixXcd atom_matrix(const std::vector<FreqSignal>& atoms) {
  const FreqGrid& g = atoms.front().grid;
  Eigen::MatrixXcd Phi(g.size, static_cast<Eigen::Index>(atoms.size()));
  for (std::size_t p = 0; p < atoms.size(); ++p) {
    atoms[p].validate();
    require_same_grid(g, atoms[p].grid);
    for (int i = 0; i < g.size; ++i) Phi(i, static_cast<Eigen::Index>(p)) = atoms[p].values[static_cast<std::size_t>(i)];
  }
  return Phi;
}

Eigen::VectorXd quadrature_weights(const FreqGrid& g) {
  Eigen::VectorXd w(g.size);
  for (int i = 0; i < g.size; ++i) w(i) = g.weight(i);
  return w;
}

}  // namespace

GramEstimate gram_oracle(const std::vector<FreqSignal>& atoms, double tol, int max_iter,
                         std::uint64_t seed) {
  if (atoms.empty()) throw std::invalid_argument("gram_oracle needs at least one atom");
  if (atoms.size() > 4096) throw std::invalid_argument("gram_oracle is limited to 4096 atoms");
  if (!(tol > 0.0) || max_iter < 1) throw std::invalid_argument("bad tolerance or iteration cap");
  const Eigen::MatrixXcd Phi = atom_matrix(atoms);
  const Eigen::VectorXd w = quadrature_weights(atoms.front().grid);
  const Eigen::MatrixXcd G = Phi.adjoint() * w.asDiagonal() * Phi;
  const Eigen::Index p = G.rows();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXcd start(p);
  for (Eigen::Index i = 0; i < p; ++i) start(i) = {normal(rng), normal(rng)};
  start.normalize();

  GramEstimate est;
  std::vector<double> history;
  Eigen::VectorXcd v = start;
  double rho = (v.adjoint() * G * v)(0).real();
  for (int it = 1;; ++it) {
    Eigen::VectorXcd Gv = G * v;
    const double nrm = Gv.norm();
    if (nrm == 0.0) {
      rho = 0.0;
      est.iterations_max = it;
      break;
    }
    v = Gv / nrm;
    const double next = (v.adjoint() * G * v)(0).real();
    history.push_back(next);
    if (std::abs(next - rho) <= tol * std::max(std::abs(next), 1e-300)) {
      rho = next;
      est.iterations_max = it;
      break;
    }
    rho = next;
    if (it >= max_iter) throw ConvergenceError("power iteration did not converge", history);
  }
  est.lambda_max = rho;
  if (est.lambda_max == 0.0) return est;

  const double delta = 1e-3 * est.lambda_max;
  const Eigen::LDLT<Eigen::MatrixXcd> ldlt(G + delta * Eigen::MatrixXcd::Identity(p, p));
  history.clear();
  v = start;
  rho = (v.adjoint() * G * v)(0).real();
  for (int it = 1;; ++it) {
    v = ldlt.solve(v);
    v.normalize();
    const double next = (v.adjoint() * G * v)(0).real();
    history.push_back(next);
    if (std::abs(next - rho) <= tol * est.lambda_max) {
      rho = next;
      est.iterations_min = it;
      break;
    }
    rho = next;
    if (it >= max_iter) throw ConvergenceError("inverse iteration did not converge", history);
  }
  est.lambda_min = std::max(0.0, rho);
  return est;
}

std::pair<double, double> frame_operator_oracle(const std::vector<FreqSignal>& atoms,
                                                const std::vector<FreqSignal>& basis) {
  if (atoms.empty() || basis.empty()) throw std::invalid_argument("need atoms and a basis");
  const Eigen::MatrixXcd Phi = atom_matrix(atoms);
  const Eigen::MatrixXcd Bm = atom_matrix(basis);
  require_same_grid(atoms.front().grid, basis.front().grid);
  const Eigen::VectorXd w = quadrature_weights(atoms.front().grid);
  const Eigen::MatrixXcd C = Phi.adjoint() * w.asDiagonal() * Bm;  // ⟨b, φ⟩
  const Eigen::MatrixXcd M = C.adjoint() * C;
  const Eigen::MatrixXcd Gb = Bm.adjoint() * w.asDiagonal() * Bm;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> es(M, Gb, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::invalid_argument("basis is not linearly independent");
  const auto& ev = es.eigenvalues();
  return {ev(0), ev(ev.size() - 1)};
}

std::vector<FreqSignal> section_atoms(const WaveletGenerator& gen, const SystemParams& params,
                                      const WeavingPattern& pattern, IndexRange j_range,
                                      long k_lo, long k_hi, const FreqGrid& grid) {
  params.validate();
  grid.validate();
  if (k_hi < k_lo) throw std::invalid_argument("empty k range");
  std::vector<FreqSignal> out;
  for (int j = j_range.first; j <= j_range.last; ++j) {
    const double period = dilation(params, pattern, j) / (params.b * grid.step);
    if (static_cast<double>(k_hi - k_lo + 1) > period + 1e-9) {
      throw std::invalid_argument(fmt::format(
          "row {}: {} translates exceed the discrete period {:.6g}; atoms would repeat on this grid",
          j, k_hi - k_lo + 1, period));
    }
    for (long k = k_lo; k <= k_hi; ++k) out.push_back(atom_spectrum(gen, params, pattern, j, k, grid));
  }
  return out;
}

IterationResult frame_iteration(const FrameOperator& apply_S, const FreqSignal& f, double A,
                                double B, double tol, int max_iter) {
  if (!(A > 0.0) || !(B >= A) || !std::isfinite(B)) {
    throw std::invalid_argument(fmt::format("frame_iteration needs 0 < A <= B < inf, got ({}, {})", A, B));
  }
  if (!(tol > 0.0) || max_iter < 1) throw std::invalid_argument("bad tolerance or iteration cap");
  f.validate();
  IterationResult res;
  res.signal = zeros_like(f.grid);
  const double nf = f.norm();
  res.residuals.push_back(nf > 0.0 ? 1.0 : 0.0);
  if (nf == 0.0) return res;
  const double relax = 2.0 / (A + B);
  FreqSignal r = f;
  for (int it = 1; it <= max_iter; ++it) {
    for (std::size_t i = 0; i < r.values.size(); ++i) res.signal.values[i] += relax * r.values[i];
    const FreqSignal Sh = apply_S(res.signal);
    require_same_grid(f.grid, Sh.grid);
    for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] = f.values[i] - Sh.values[i];
    const double rel = r.norm() / nf;
    res.residuals.push_back(rel);
    res.iterations = it;
    if (rel <= tol) return res;
  }
  throw ConvergenceError(
      fmt::format("frame iteration stalled at residual {:.3g} after {} steps", res.residuals.back(),
                  max_iter),
      res.residuals);
}

}  // namespace frameweave
