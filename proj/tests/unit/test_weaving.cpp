#include <doctest.h>

#include <random>

#include "frameweave/weaving.hpp"
#include "oracles.hpp"

using namespace frameweave;

namespace {

const auto kPowerLaw = make_powerlaw_wavelet(0.5, 1.0);
double pl_power(double x) { return oracle::powerlaw_power(x, 0.5, 1.0); }

}  // namespace

TEST_CASE("packet families") {
  const auto f = packet_family({2.0, 0.5, 3}, 2);
  CHECK(f.scale(1) == doctest::Approx(32.0));
  CHECK(f.space_index(-1) == -1);
  CHECK(f.translation_step() == 0.5);
  CHECK_THROWS_AS((packet_family({2.0, 0.5, 3}, 3)), std::invalid_argument);
  CHECK_THROWS_AS((packet_family({2.0, 0.5, 3}, -1)), std::invalid_argument);
}

TEST_CASE("weave certificate (1/3, 10/3) for N = 2") {
  const SystemParams p{2.0, 0.5, 2};
  const auto c = weave_certificate(kPowerLaw, p, 4096);
  CHECK(c.L_weave == doctest::Approx(1.0 / 3.0).epsilon(1e-3));
  CHECK(c.U_weave == doctest::Approx(10.0 / 3.0).epsilon(1e-3));
  CHECK(c.certified);

  // Closed-form oracle of the pointwise min/max sums, sampled independently.
  double lo = INFINITY, hi = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double g = std::pow(4.0, i / 20000.0);
    const auto [mn, mx] = oracle::adversary(g, 2.0, 0.5, 2, pl_power);
    lo = std::min(lo, mn);
    hi = std::max(hi, mx);
  }
  CHECK(c.L_weave == doctest::Approx(lo).epsilon(1e-3));
  CHECK(c.U_weave == doctest::Approx(hi).epsilon(1e-3));
  CHECK(c.L_weave <= lo + grid_tolerance(c));
  CHECK(c.U_weave >= hi - grid_tolerance(c));
}

TEST_CASE("witness pattern attains the lower certificate") {
  const SystemParams p{2.0, 0.5, 2};
  const auto c = weave_certificate(kPowerLaw, p, 4096);
  REQUIRE_FALSE(c.witness_choices.empty());
  const auto w = WeavingPattern::windowed(2, c.witness_window.first, c.witness_choices);
  CHECK(multiplier(kPowerLaw, p, w, c.argmin) == doctest::Approx(c.L_weave).epsilon(1e-9));
}

TEST_CASE("with N = 1 the certificate is the frame bound pair") {
  const SystemParams p{2.0, 0.5, 1};
  const auto c = weave_certificate(kPowerLaw, p, 4096);
  const auto b = frame_bounds(kPowerLaw, p, WeavingPattern::constant(1, 0), 4096);
  CHECK(c.L_weave == doctest::Approx(b.A_num).epsilon(1e-9));
  CHECK(c.U_weave == doctest::Approx(b.B_num).epsilon(1e-9));
}

TEST_CASE("woven bounds carry the certificate") {
  const SystemParams p{2.0, 0.5, 2};
  const auto pat = WeavingPattern::windowed(2, -3, {1, 0, 1, 1}, Extension::Periodic);
  const auto b = woven_bounds(kPowerLaw, p, pat, 2048);
  REQUIRE(b.L_weave);
  const double tol = grid_tolerance(b);
  CHECK(*b.L_weave <= b.A_num + tol);
  CHECK(b.B_num <= *b.U_weave + tol);
}

TEST_CASE("random patterns stay inside the certificate") {
  const SystemParams p{2.0, 0.5, 2};
  const auto r = sample_patterns(kPowerLaw, p, 100, 2024, {-5, 5});
  CHECK(r.count == 100);
  CHECK(r.patterns.size() == 100);
  CHECK(r.violations == 0);
  CHECK(r.all_within);
  CHECK(r.min_A >= r.certificate.L_weave - r.tolerance);
  CHECK(r.max_B <= r.certificate.U_weave + r.tolerance);

  const auto again = sample_patterns(kPowerLaw, p, 100, 2024, {-5, 5});
  CHECK(again.min_A == r.min_A);
  CHECK(again.patterns[37].choices == r.patterns[37].choices);
  const auto other = sample_patterns(kPowerLaw, p, 100, 2025, {-5, 5});
  CHECK(other.patterns[0].choices != r.patterns[0].choices);
}

TEST_CASE("pattern table agrees with frame_bounds") {
  const SystemParams p{2.0, 0.5, 2};
  SweepOptions o;
  const PatternTable table(kPowerLaw, p, {0, 5}, o);
  const std::vector<int> choices{1, 0, 0, 1, 1, 0};
  const auto tb = table.evaluate(choices);
  const auto fb = frame_bounds(kPowerLaw, p, WeavingPattern::windowed(2, 0, choices), o);
  const double tol = 2 * (tb.refine_gain + grid_tolerance(fb)) + 1e-12;
  CHECK(tb.A == doctest::Approx(fb.A_num).epsilon(tol));
  CHECK(tb.B == doctest::Approx(fb.B_num).epsilon(tol));
  CHECK_THROWS(table.evaluate({0, 1}));
  CHECK_THROWS(table.evaluate({0, 1, 2, 0, 0, 0}));
}

TEST_CASE("exhaustive enumeration on a length-10 window") {
  const SystemParams p{2.0, 0.5, 2};
  const auto r = enumerate_patterns(kPowerLaw, p, {0, 9});
  CHECK(r.pattern_count == 1024);
  CHECK(r.violations == 0);
  CHECK(r.all_within);
  CHECK(r.certificate_gap >= -r.tolerance);
  CHECK(r.certificate_gap == doctest::Approx(r.min_A - r.certificate.L_weave));
  CHECK_THROWS_AS((enumerate_patterns(kPowerLaw, p, {0, 20})), std::invalid_argument);
}
