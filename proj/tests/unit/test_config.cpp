#include <doctest.h>

#include <string>

#include "frameweave/config.hpp"

using namespace frameweave;

namespace {

std::string error_of(const std::string& text, const std::string& command) {
  try {
    parse_config(text, command);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("parses a full config") {
  const auto c = parse_config(
      "command = weave-sample\n"
      "[generator]\nkind = powerlaw\nalpha = 0.5\ncutoff = 1.0\n"
      "[system]\na = 2\nb = 0.5\nN = 2\n"
      "[pattern]\nkind = periodic\nfirst = -1\nchoices = 1, 0, 1\n"
      "[sweep]\ngrid_points = 1024\n"
      "[weave]\nwindow_first = -5\nwindow_last = 5\ncount = 10\nseed = 42\n",
      "weave-sample");
  CHECK(c.N == 2);
  CHECK(c.b == 0.5);
  CHECK(c.grid_points == 1024);
  CHECK(c.count == 10);
  CHECK(c.seed == 42);
  CHECK(c.window.first == -5);
  CHECK(c.pattern.choices == std::vector<int>{1, 0, 1});
  CHECK(c.raw.at("system.N") == "2");
  const auto p = make_pattern(c.pattern, c.N);
  CHECK(p.is_periodic());
  CHECK(p.choice(2) == 1);
  CHECK(make_wavelet(c.generator).outer_radius() == 1.0);
}

TEST_CASE("defaults") {
  const auto c = parse_config("", "bounds");
  CHECK(c.grid_points == 4096);
  CHECK(c.N == 1);
  CHECK(c.fallback.value == 0);
  CHECK(c.sizes == std::vector<int>{2, 4, 8, 16, 64});
  CHECK(parse_config("[system]\nN = 3\n", "erasure").fallback.value == 1);
}

TEST_CASE("errors name the offending key") {
  CHECK(error_of("[system]\nN = two\n", "bounds").find("'system.N'") != std::string::npos);
  CHECK(error_of("[system]\nc = 1\n", "bounds").find("'system.c'") != std::string::npos);
  CHECK(error_of("[bogus]\nx = 1\n", "bounds").find("[bogus]") != std::string::npos);
  CHECK(error_of("grid = 1\n", "bounds").find("'grid'") != std::string::npos);
  CHECK(error_of("[sweep]\ngrid_points = 8\n", "bounds").find("'sweep.grid_points'") !=
        std::string::npos);
  CHECK(error_of("[system]\nb = -1\n", "bounds").find("'system.b'") != std::string::npos);
  CHECK(error_of("[generator]\nkind = sinc\n", "bounds").find("'generator.kind'") !=
        std::string::npos);
  CHECK(error_of("[pattern]\nchoices = 1, x\n", "bounds").find("'pattern.choices'") !=
        std::string::npos);
  CHECK(error_of("[output]\ncsv = maybe\n", "bounds").find("'output.csv'") != std::string::npos);
  CHECK(error_of("", "frobnicate").find("unknown command") != std::string::npos);
  CHECK(error_of("command = bounds\n", "density-gate").find("'command'") != std::string::npos);
  CHECK_FALSE(error_of("[system\n", "bounds").empty());
}

TEST_CASE("missing files") {
  CHECK_THROWS_AS((load_config("/nonexistent/x.ini", "bounds")), ConfigError);
  CHECK_THROWS_AS((load_config("configs/bad_packet_path.ini.missing", "fusion-demo")), ConfigError);
}

TEST_CASE("generator kinds") {
  GeneratorSpec g;
  g.kind = "indicator";
  CHECK_THROWS_AS((make_wavelet(g)), ConfigError);
  CHECK(make_gabor(g).length() == 3.0);
  g.kind = "band";
  CHECK_THROWS_AS((make_gabor(g)), ConfigError);
  CHECK(make_wavelet(g).inner_radius() == 1.0);
}
