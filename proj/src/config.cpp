#include "frameweave/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

namespace frameweave {

namespace pt = boost::property_tree;

const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> cmds{
      "bounds",       "weave-certify", "weave-sample", "weave-enumerate",
      "gabor-bounds", "gabor-certify", "density-gate", "reconstruct",
      "erasure",      "fusion-demo",   "counterexample"};
  return cmds;
}

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"", {"command"}},
      {"generator", {"kind", "alpha", "cutoff", "lo", "hi", "height", "length"}},
      {"system", {"a", "b", "N"}},
      {"pattern", {"kind", "value", "first", "choices", "window_first", "window_last"}},
      {"fallback", {"kind", "value", "first", "choices", "window_first", "window_last"}},
      {"sweep", {"grid_points", "refine_points", "tail_relative"}},
      {"weave", {"window_first", "window_last", "count", "seed"}},
      {"signal", {"J_hi", "intervals", "m_lo", "m_hi", "count", "seed", "mode"}},
      {"erasure", {"erased", "period"}},
      {"packet", {"file", "sizes", "trials", "seed", "ambient", "subspaces", "dim", "count"}},
      {"output", {"csv", "timing"}},
  };
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\"");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\"");
  return s.substr(b, e - b + 1);
}

class Reader {
 public:
  explicit Reader(std::map<std::string, std::string> raw) : raw_(std::move(raw)) {}

  const std::string* find(const std::string& key) const {
    auto it = raw_.find(key);
    return it == raw_.end() ? nullptr : &it->second;
  }

  void get(const std::string& key, double& out) const {
    if (const auto* v = find(key)) {
      std::size_t pos = 0;
      try {
        out = std::stod(*v, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos == 0 || pos != v->size() || !std::isfinite(out)) bad(key, "a finite number", *v);
    }
  }
  void get(const std::string& key, int& out) const {
    if (const auto* v = find(key)) {
      const auto r = std::from_chars(v->data(), v->data() + v->size(), out);
      if (r.ec != std::errc() || r.ptr != v->data() + v->size()) bad(key, "an integer", *v);
    }
  }
  void get(const std::string& key, std::uint64_t& out) const {
    if (const auto* v = find(key)) {
      const auto r = std::from_chars(v->data(), v->data() + v->size(), out);
      if (r.ec != std::errc() || r.ptr != v->data() + v->size()) {
        bad(key, "a non-negative integer", *v);
      }
    }
  }
  void get(const std::string& key, bool& out) const {
    if (const auto* v = find(key)) {
      if (*v == "true" || *v == "1" || *v == "yes") {
        out = true;
      } else if (*v == "false" || *v == "0" || *v == "no") {
        out = false;
      } else {
        bad(key, "true or false", *v);
      }
    }
  }
  void get(const std::string& key, std::string& out) const {
    if (const auto* v = find(key)) out = *v;
  }
  void get(const std::string& key, std::vector<int>& out) const {
    if (const auto* v = find(key)) {
      std::string s = *v;
      std::replace(s.begin(), s.end(), ',', ' ');
      std::replace(s.begin(), s.end(), '[', ' ');
      std::replace(s.begin(), s.end(), ']', ' ');
      std::istringstream in(s);
      std::vector<int> vals;
      std::string tok;
      while (in >> tok) {
        int x = 0;
        const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), x);
        if (r.ec != std::errc() || r.ptr != tok.data() + tok.size()) bad(key, "a list of integers", *v);
        vals.push_back(x);
      }
      out = std::move(vals);
    }
  }

  [[noreturn]] static void bad(const std::string& key, const char* expected,
                               const std::string& got) {
    throw ConfigError(fmt::format("config key '{}': expected {}, got '{}'", key, expected, got));
  }

 private:
  std::map<std::string, std::string> raw_;
};

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(fmt::format("config key '{}': {}", key, what));
}

void read_pattern(const Reader& r, const std::string& sec, PatternSpec& p) {
  r.get(sec + ".kind", p.kind);
  r.get(sec + ".value", p.value);
  r.get(sec + ".first", p.first);
  r.get(sec + ".choices", p.choices);
  r.get(sec + ".window_first", p.window_first);
  r.get(sec + ".window_last", p.window_last);
  require(p.kind == "constant" || p.kind == "alternating" || p.kind == "windowed" ||
              p.kind == "periodic",
          sec + ".kind", "must be constant, alternating, windowed or periodic");
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& command) {
  if (std::find(known_commands().begin(), known_commands().end(), command) ==
      known_commands().end()) {
    throw ConfigError(fmt::format("unknown command '{}'", command));
  }
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(fmt::format("config line {}: {}", e.line(), e.message()));
  }

  std::map<std::string, std::string> raw;
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      const std::string key = name;
      if (!schema().at("").count(key)) throw ConfigError(fmt::format("unknown config key '{}'", key));
      raw[key] = trim(node.data());
      continue;
    }
    auto sec = schema().find(name);
    if (sec == schema().end() || name.empty()) {
      throw ConfigError(fmt::format("unknown config section '[{}]'", name));
    }
    for (const auto& [key, leaf] : node) {
      if (!sec->second.count(key)) {
        throw ConfigError(fmt::format("unknown config key '{}.{}'", name, key));
      }
      raw[name + "." + key] = trim(leaf.data());
    }
  }

  RunConfig c;
  c.command = command;
  c.raw = raw;
  const Reader r(raw);
  if (const auto* cmd = r.find("command")) {
    require(*cmd == command, "command", fmt::format("config is for '{}', not '{}'", *cmd, command));
  }

  auto& g = c.generator;
  r.get("generator.kind", g.kind);
  require(g.kind == "powerlaw" || g.kind == "band" || g.kind == "indicator", "generator.kind",
          "must be powerlaw, band or indicator");
  r.get("generator.alpha", g.alpha);
  r.get("generator.cutoff", g.cutoff);
  r.get("generator.lo", g.lo);
  r.get("generator.hi", g.hi);
  r.get("generator.height", g.height);
  r.get("generator.length", g.length);

  r.get("system.a", c.a);
  r.get("system.b", c.b);
  r.get("system.N", c.N);
  require(c.a > 0.0, "system.a", "must be positive");
  require(c.b > 0.0, "system.b", "must be positive");
  require(c.N >= 1, "system.N", "must be >= 1");

  read_pattern(r, "pattern", c.pattern);
  c.fallback.kind = "constant";
  c.fallback.value = std::min(1, c.N - 1);
  read_pattern(r, "fallback", c.fallback);

  r.get("sweep.grid_points", c.grid_points);
  r.get("sweep.refine_points", c.refine_points);
  r.get("sweep.tail_relative", c.tail_relative);
  require(c.grid_points >= 16, "sweep.grid_points", "must be >= 16");
  require(c.refine_points >= 0, "sweep.refine_points", "must be >= 0");
  require(c.tail_relative > 0.0, "sweep.tail_relative", "must be positive");

  r.get("weave.window_first", c.window.first);
  r.get("weave.window_last", c.window.last);
  r.get("weave.count", c.count);
  r.get("weave.seed", c.seed);

  r.get("signal.J_hi", c.J_hi);
  r.get("signal.intervals", c.intervals);
  r.get("signal.m_lo", c.m_lo);
  r.get("signal.m_hi", c.m_hi);
  r.get("signal.mode", c.mode);
  require(c.mode == "pointwise" || c.mode == "coefficients", "signal.mode",
          "must be pointwise or coefficients");
  require(c.intervals >= 16, "signal.intervals", "must be >= 16");
  if (command == "reconstruct" || command == "erasure") {
    r.get("signal.count", c.count);
    r.get("signal.seed", c.seed);
  }

  r.get("erasure.erased", c.erased);
  if (r.find("erasure.period")) {
    int p = 0;
    r.get("erasure.period", p);
    require(p >= 1, "erasure.period", "must be >= 1");
    c.erased_period = p;
  }

  r.get("packet.file", c.packet_file);
  r.get("packet.sizes", c.sizes);
  r.get("packet.trials", c.trials);
  r.get("packet.ambient", c.ambient);
  r.get("packet.subspaces", c.subspaces);
  r.get("packet.dim", c.dim);
  if (command == "fusion-demo" || command == "counterexample") {
    r.get("packet.count", c.count);
    r.get("packet.seed", c.seed);
  }
  require(c.trials >= 1, "packet.trials", "must be >= 1");

  r.get("output.csv", c.csv);
  r.get("output.timing", c.timing);
  require(c.count >= 1, "count", "must be >= 1");
  return c;
}

RunConfig load_config(const std::string& path, const std::string& command) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig c = parse_config(ss.str(), command);
  if (!c.packet_file.empty()) {
    const std::filesystem::path file(c.packet_file);
    if (file.is_relative()) {
      c.packet_file = (std::filesystem::path(path).parent_path() / file).lexically_normal().string();
    }
    if (!std::filesystem::exists(c.packet_file)) {
      throw ConfigError(fmt::format("config key 'packet.file': no such file '{}'", c.packet_file));
    }
  }
  return c;
}

WaveletGenerator make_wavelet(const GeneratorSpec& spec) {
  if (spec.kind == "powerlaw") return make_powerlaw_wavelet(spec.alpha, spec.cutoff);
  if (spec.kind == "band") return make_band_wavelet(spec.lo, spec.hi, spec.height);
  throw ConfigError(fmt::format("generator.kind '{}' is not a wavelet generator", spec.kind));
}

GaborGenerator make_gabor(const GeneratorSpec& spec) {
  if (spec.kind != "indicator") {
    throw ConfigError(fmt::format("generator.kind '{}' is not a Gabor window", spec.kind));
  }
  return GaborGenerator(0.0, spec.length, spec.height);
}

WeavingPattern make_pattern(const PatternSpec& spec, int N) {
  if (spec.kind == "constant") return WeavingPattern::constant(N, spec.value);
  if (spec.kind == "alternating") {
    return WeavingPattern::alternating(N, {spec.window_first, spec.window_last});
  }
  if (spec.choices.empty()) throw ConfigError("pattern choices must not be empty");
  return WeavingPattern::windowed(N, spec.first, spec.choices,
                                  spec.kind == "periodic" ? Extension::Periodic : Extension::Zero);
}

}  // namespace frameweave
