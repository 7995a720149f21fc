#include <doctest.h>

#include <stdexcept>

#include "frameweave/generators.hpp"

using namespace frameweave;

TEST_CASE("power law generator values and support") {
  const auto g = make_powerlaw_wavelet(0.5, 1.0);
  CHECK(g(0.25) == doctest::Approx(0.5));
  CHECK(g(-0.25) == doctest::Approx(0.5));
  CHECK(g(1.0) == doctest::Approx(1.0));
  CHECK(g(1.0000001) == 0.0);
  CHECK(g(0.0) == 0.0);
  CHECK(g.power(0.36) == doctest::Approx(0.36));
  CHECK(g.is_even());
  CHECK(g.outer_radius() == 1.0);
  CHECK(g.inner_radius() == 0.0);
  CHECK(g.support().length() == 2.0);
  CHECK(g.sup_norm() == doctest::Approx(1.0));
  CHECK(eval_freq(g, 0.81) == doctest::Approx(0.9));
}

TEST_CASE("band generator is closed on both ends") {
  const auto g = make_band_wavelet(1.0, 2.0, 3.0);
  CHECK(g(1.0) == 3.0);
  CHECK(g(2.0) == 3.0);
  CHECK(g(1.5) == 3.0);
  CHECK(g(0.999) == 0.0);
  CHECK(g(-1.5) == 0.0);
  CHECK_FALSE(g.is_even());
  CHECK(g.inner_radius() == 1.0);
  CHECK(g.outer_radius() == 2.0);
  CHECK(make_band_wavelet(-2.0, 2.0).is_even());
}

TEST_CASE("generator parameter validation") {
  CHECK_THROWS_AS((make_powerlaw_wavelet(0.0, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS((make_powerlaw_wavelet(0.5, -1.0)), std::invalid_argument);
  CHECK_THROWS_AS((make_band_wavelet(2.0, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS((GaborGenerator(0.0, 0.0)), std::invalid_argument);
}

TEST_CASE("envelope validation reports violations") {
  const auto g = make_powerlaw_wavelet(0.5, 1.0);
  const auto ok = validate_envelope(g, 1000);
  CHECK(ok.passed());
  const auto bad = validate_envelope(g.with_envelope({2.0, 1.0, 0.5, 0.5, 1.0}), 1000);
  CHECK_FALSE(bad.lower_ok);
  CHECK(bad.upper_ok);
  CHECK(bad.worst_lower_excess > 0.0);
  const auto bad_upper = validate_envelope(g.with_envelope({1.0, 0.5, 0.5, 0.5, 1.0}), 1000);
  CHECK_FALSE(bad_upper.upper_ok);
}

TEST_CASE("indicator window is half open") {
  const GaborGenerator g(0.0, 3.0);
  CHECK(g(0.0) == 1.0);
  CHECK(g(2.999) == 1.0);
  CHECK(g(3.0) == 0.0);
  CHECK(g(-1e-12) == 0.0);
  CHECK(g.floor_holds_on({0.0, 3.0}));
  CHECK(g.floor_holds_on({1.0, 2.0}));
  CHECK_FALSE(g.floor_holds_on({0.0, 3.5}));
  CHECK_FALSE(g.floor_holds_on({-0.5, 1.0}));
  CHECK(make_indicator_gabor(2.0).length() == 2.0);
  const GaborGenerator h(1.0, 2.0, 0.5);
  CHECK(h.power(2.0) == 0.25);
  CHECK(h.floor_eps() == 0.5);
}
