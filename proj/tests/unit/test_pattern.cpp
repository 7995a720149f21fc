#include <doctest.h>

#include <stdexcept>

#include "frameweave/pattern.hpp"

using namespace frameweave;

TEST_CASE("index ranges") {
  const IndexRange r{-2, 3};
  CHECK(r.size() == 6);
  CHECK(r.contains(-2));
  CHECK_FALSE(r.contains(4));
  CHECK(IndexRange{}.empty());
  CHECK(IndexRange{3, 2}.size() == 0);
}

TEST_CASE("system parameter validation") {
  CHECK_NOTHROW(SystemParams{2.0, 0.5, 1}.validate());
  CHECK_THROWS_AS((SystemParams{1.0, 0.5, 1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((SystemParams{2.0, 0.0, 1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((SystemParams{2.0, 0.5, 0}.validate()), std::invalid_argument);
}

TEST_CASE("pattern extensions") {
  const auto c = WeavingPattern::constant(3, 2);
  CHECK(c.choice(-100) == 2);
  CHECK(c.choice(57) == 2);
  CHECK(c.is_periodic());
  CHECK(c.period() == 1);

  const auto z = WeavingPattern::windowed(2, -1, {1, 0, 1});
  CHECK(z.choice(-2) == 0);
  CHECK(z.choice(-1) == 1);
  CHECK(z.choice(1) == 1);
  CHECK(z.choice(2) == 0);
  CHECK_FALSE(z.is_periodic());
  CHECK(z.window().first == -1);
  CHECK(z.window().last == 1);

  const auto p = WeavingPattern::windowed(3, 1, {0, 1, 2}, Extension::Periodic);
  CHECK(p.is_periodic());
  CHECK(p.period() == 3);
  for (int j = -10; j <= 10; ++j) CHECK(p.choice(j) == ((j - 1) % 3 + 3) % 3);

  const auto alt = WeavingPattern::alternating(2, {-3, 3});
  CHECK(alt.choice(-3) == 1);
  CHECK(alt.choice(2) == 0);
  CHECK(alt.choice(3) == 1);
  CHECK(alt.choice(5) == 0);

  CHECK(WeavingPattern::windowed(2, 0, {0, 0, 0}).is_periodic());
}

TEST_CASE("pattern choices must lie in range") {
  CHECK_THROWS_AS((WeavingPattern::constant(2, 2)), std::invalid_argument);
  CHECK_THROWS_AS((WeavingPattern::windowed(2, 0, {0, -1})), std::invalid_argument);
  CHECK_THROWS_AS((WeavingPattern::constant(0, 0)), std::invalid_argument);
}
