#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "frameweave/errors.hpp"
#include "frameweave/transform.hpp"

using namespace frameweave;

namespace {

const auto kPowerLaw = make_powerlaw_wavelet(0.5, 1.0);

// Nodes avoid ±λ, where the closed support of a row would be sampled twice
// one discrete period apart.
FreqGrid offset_grid() { return FreqGrid{-4.0 + 1.0 / 256.0, 1.0 / 128.0, 1024}; }

double relative_diff(const FreqSignal& x, const FreqSignal& y) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.values.size(); ++i) {
    num += std::norm(x.values[i] - y.values[i]);
    den += std::norm(y.values[i]);
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("frequency grids and CSV round trip") {
  const auto g = FreqGrid::symmetric(2.0, 8);
  CHECK(g.size == 9);
  CHECK(g.lo == -2.0);
  CHECK(g.hi() == doctest::Approx(2.0));
  CHECK(g.weight(0) == 0.25);
  CHECK(g.weight(4) == 0.5);
  CHECK_THROWS(FreqGrid{0.0, 0.0, 4}.validate());

  const auto f = random_bump_signal(default_grid(kPowerLaw, {2.0, 0.5, 1}, 3, 1024), 1.0, 2.0,
                                    -3, 1, 4);
  const auto back = FreqSignal::from_csv(f.to_csv());
  CHECK(back.grid.size == f.grid.size);
  CHECK(back.values == f.values);
  CHECK(back.energy() == doctest::Approx(f.energy()).epsilon(1e-14));
  CHECK_THROWS(FreqSignal::from_csv("gamma,re,im\n0,1,0\n1,1,0\n3,1,0\n"));
  CHECK_THROWS(FreqSignal::from_csv("nonsense"));
}

TEST_CASE("atom spectra follow the closed form") {
  const SystemParams p{2.0, 0.5, 2};
  const auto pat = WeavingPattern::constant(2, 1);
  const auto grid = offset_grid();
  const auto atom = atom_spectrum(kPowerLaw, p, pat, -1, 3, grid);
  const double lambda = std::pow(2.0, -1.0);
  for (int i = 0; i < grid.size; i += 13) {
    const double g = grid.gamma(i);
    const double amp = std::abs(g / lambda) <= 1.0 ? std::sqrt(std::abs(g / lambda)) : 0.0;
    const std::complex<double> ref =
        amp / std::sqrt(lambda) * std::polar(1.0, -2.0 * std::numbers::pi * 3 * 0.5 * g / lambda);
    CHECK(std::abs(atom.values[static_cast<std::size_t>(i)] - ref) < 1e-12);
  }
}

TEST_CASE("FFT analysis equals direct quadrature and obeys discrete Parseval") {
  const SystemParams p{2.0, 0.5, 1};
  const auto pat = WeavingPattern::constant(1, 0);
  const auto grid = default_grid(kPowerLaw, p, 3, 1 << 12);
  const auto f = random_bump_signal(grid, 1.0, 2.0, -3, 1, 21);
  const IndexRange rows = fitting_rows(kPowerLaw, p, pat, f);
  const auto table = analysis(kPowerLaw, p, pat, f, rows);
  REQUIRE(table.rows.size() == static_cast<std::size_t>(rows.size()));
  for (const auto& r : table.rows) CHECK(r.full_period);

  const auto direct = analysis(kPowerLaw, p, pat, f, rows, std::make_pair(-5L, 5L));
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& fft = table.rows[r];
    const auto& dir = direct.rows[r];
    for (long k = -5; k <= 5; ++k) {
      const auto a = fft.coeffs[static_cast<std::size_t>(k - fft.k_first)];
      const auto b = dir.coeffs[static_cast<std::size_t>(k - dir.k_first)];
      CHECK(std::abs(a - b) <= 1e-11 * (1.0 + std::abs(b)));
    }
  }

  const auto mJ = truncated_multiplier(kPowerLaw, p, pat, grid, rows);
  double rhs = 0.0;
  for (int i = 0; i < grid.size; ++i) {
    rhs += grid.weight(i) * mJ[static_cast<std::size_t>(i)] * std::norm(f.values[static_cast<std::size_t>(i)]);
  }
  CHECK(table.energy() == doctest::Approx(rhs).epsilon(1e-12));

  const auto s = synthesis(kPowerLaw, p, pat, table, grid);
  for (int i = 0; i < grid.size; ++i) {
    const auto expect = mJ[static_cast<std::size_t>(i)] * f.values[static_cast<std::size_t>(i)];
    CHECK(std::abs(s.values[static_cast<std::size_t>(i)] - expect) <= 1e-10 * (1.0 + std::abs(expect)));
  }
}

TEST_CASE("painless reconstruction round trip") {
  struct Case {
    int N;
    WeavingPattern pattern;
  };
  const std::vector<Case> cases{
      {1, WeavingPattern::constant(1, 0)},
      {2, WeavingPattern::constant(2, 1)},
      {2, WeavingPattern::windowed(2, -3, {1, 0, 1, 1, 0, 1})},
  };
  for (const auto& c : cases) {
    const SystemParams p{2.0, 0.5, c.N};
    const auto grid = default_grid(kPowerLaw, p, 2, 1 << 12);
    for (int s = 0; s < 10; ++s) {
      const auto f = random_bump_signal(grid, 1.0, 2.0, -3, 1, 100 + s);
      const auto r = reconstruct_painless(kPowerLaw, p, c.pattern, f);
      CHECK(r.relative_error <= 1e-10);
      CHECK(relative_diff(r.signal, f) <= 1e-10);
      CHECK(r.min_multiplier_on_support > 0.0);
    }
    const auto f = random_bump_signal(grid, 1.0, 2.0, -3, 1, 7);
    const auto rc = reconstruct_painless(kPowerLaw, p, c.pattern, f, ApplyMode::Coefficients);
    CHECK(rc.relative_error <= 1e-10);
    CHECK_FALSE(rc.j_range.empty());
  }
}

TEST_CASE("gaps in the multiplier are not invertible") {
  const auto band = make_band_wavelet(1.0, 1.5);
  const SystemParams p{2.0, 2.0, 1};
  const auto grid = default_grid(band, p, 2, 1 << 12);
  const auto f = random_bump_signal(grid, 1.0, 2.0, -2, 0, 3);
  CHECK_THROWS_AS((reconstruct_painless(band, p, WeavingPattern::constant(1, 0), f)),
                  NotInvertibleError);
  CHECK_THROWS_AS((reconstruct_painless(kPowerLaw, {2.0, 0.7, 1}, WeavingPattern::constant(1, 0),
                                       random_bump_signal(default_grid(kPowerLaw, {2.0, 0.5, 1}, 2, 512),
                                                          1.0, 2.0, -2, 0, 1))),
                  PreconditionError);
}

TEST_CASE("frame iteration converges at rate (B - A)/(B + A)") {
  const auto grid = FreqGrid::symmetric(5.0, 1000);
  const auto f = random_bump_signal(grid, 1.0, 2.0, -2, 1, 5);
  // A multiplier with exact bounds (2, 4).
  const FrameOperator S = [](const FreqSignal& h) {
    FreqSignal out = h;
    for (int i = 0; i < h.grid.size; ++i) {
      out.values[static_cast<std::size_t>(i)] *= 3.0 + std::cos(h.grid.gamma(i));
    }
    return out;
  };
  const auto r = frame_iteration(S, f, 2.0, 4.0, 1e-8, 100);
  CHECK(r.iterations <= 17);
  CHECK(r.residuals.back() <= 1e-8);
  for (std::size_t i = 1; i < r.residuals.size(); ++i) {
    CHECK(r.residuals[i] <= r.residuals[i - 1] / 3.0 + 1e-15);
  }
  CHECK_THROWS_AS((frame_iteration(S, f, 2.0, 4.0, 1e-8, 3)), ConvergenceError);
  CHECK_THROWS(frame_iteration(S, f, 0.0, 4.0, 1e-8, 10));
  CHECK_THROWS(frame_iteration(S, f, 5.0, 4.0, 1e-8, 10));
}

TEST_CASE("Gram oracle agrees with a dense eigensolve and respects B") {
  const SystemParams p{2.0, 0.5, 1};
  const auto pat = WeavingPattern::constant(1, 0);
  const auto grid = offset_grid();
  const auto atoms = section_atoms(kPowerLaw, p, pat, {-3, 1}, -16, 15, grid);
  REQUIRE(atoms.size() == 160);
  const auto est = gram_oracle(atoms);

  Eigen::MatrixXcd G(160, 160);
  for (int q = 0; q < 160; ++q) {
    for (int r = 0; r < 160; ++r) {
      std::complex<double> s = 0.0;
      for (int i = 0; i < grid.size; ++i) {
        s += grid.weight(i) * atoms[static_cast<std::size_t>(q)].values[static_cast<std::size_t>(i)] *
             std::conj(atoms[static_cast<std::size_t>(r)].values[static_cast<std::size_t>(i)]);
      }
      G(r, q) = s;
    }
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
  CHECK(est.lambda_max == doctest::Approx(es.eigenvalues().maxCoeff()).epsilon(1e-6));
  CHECK(est.lambda_min >= -1e-9);
  CHECK(est.lambda_min <= es.eigenvalues().minCoeff() + 1e-6 * est.lambda_max);
  CHECK(est.lambda_max <= 4.0 + 1e-3);

  CHECK_THROWS(section_atoms(kPowerLaw, p, pat, {-3, 1}, -16, 16, grid));
  CHECK_THROWS(gram_oracle({}));
}

TEST_CASE("compressed frame operator grows with the section") {
  const SystemParams p{2.0, 0.5, 1};
  const auto pat = WeavingPattern::constant(1, 0);
  const auto grid = offset_grid();
  std::vector<FreqSignal> basis;
  for (int s = 0; s < 4; ++s) basis.push_back(random_bump_signal(grid, 1.0, 2.0, -2, 0, 50 + s));
  const auto small = frame_operator_oracle(section_atoms(kPowerLaw, p, pat, {-1, 0}, -4, 3, grid), basis);
  const auto mid = frame_operator_oracle(section_atoms(kPowerLaw, p, pat, {-2, 0}, -8, 7, grid), basis);
  const auto big = frame_operator_oracle(section_atoms(kPowerLaw, p, pat, {-3, 1}, -16, 15, grid), basis);
  CHECK(mid.first >= small.first - 1e-12);
  CHECK(big.first >= mid.first - 1e-12);
  CHECK(mid.second >= small.second - 1e-12);
  CHECK(big.second >= mid.second - 1e-12);
  CHECK(big.second <= 4.0 + 1e-3);
}

TEST_CASE("erasures with a fallback family") {
  const SystemParams p{2.0, 0.5, 2};
  const auto grid = default_grid(kPowerLaw, p, 2, 1 << 12);
  const auto f = random_bump_signal(grid, 1.0, 2.0, -3, 1, 12);
  const auto fallback = WeavingPattern::constant(2, 1);
  const auto r = erasure_experiment(kPowerLaw, p, f, {2, -1, 0, 2}, fallback);
  CHECK(r.erased == std::vector<int>{-1, 0, 2});
  CHECK(r.mixed.choice(0) == 1);
  CHECK(r.mixed.choice(1) == 0);
  CHECK(r.relative_error <= 1e-10);
  CHECK(r.within_certificate);

  const auto periodic = erasure_experiment(kPowerLaw, p, f, {1}, fallback, 3);
  CHECK(periodic.mixed.is_periodic());
  CHECK(periodic.mixed.choice(4) == 1);
  CHECK(periodic.mixed.choice(5) == 0);
  CHECK(periodic.within_certificate);

  CHECK_THROWS(erasure_experiment(kPowerLaw, p, f, {0}, WeavingPattern::constant(2, 0)));
  CHECK_THROWS(erasure_experiment(kPowerLaw, p, f, {3}, fallback, 3));
  const auto none = erasure_experiment(kPowerLaw, p, f, {}, fallback);
  CHECK(none.mixed.choice(5) == 0);
}
