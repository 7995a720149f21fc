#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "frameweave/generators.hpp"
#include "frameweave/pattern.hpp"

namespace frameweave {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::vector<std::string>& known_commands();

struct GeneratorSpec {
  std::string kind = "powerlaw";  // powerlaw | band | indicator
  double alpha = 0.5;
  double cutoff = 1.0;
  double lo = 1.0;
  double hi = 2.0;
  double height = 1.0;
  double length = 3.0;
};

struct PatternSpec {
  std::string kind = "constant";  // constant | alternating | windowed | periodic
  int value = 0;
  int first = 0;
  std::vector<int> choices;
  int window_first = 0;
  int window_last = -1;
};

struct RunConfig {
  std::string command;
  GeneratorSpec generator;
  double a = 2.0;
  double b = 0.5;
  int N = 1;
  PatternSpec pattern;

  int grid_points = 4096;
  int refine_points = 256;
  double tail_relative = 1e-12;

  std::uint64_t seed = 1;
  int count = 100;
  IndexRange window{0, 9};

  // reconstruct / erasure signals
  int J_hi = 3;
  int intervals = 1 << 14;
  int m_lo = -3;
  int m_hi = 1;
  std::string mode = "pointwise";  // pointwise | coefficients
  std::vector<int> erased;
  std::optional<int> erased_period;
  PatternSpec fallback;

  // packets
  std::string packet_file;
  std::vector<int> sizes{2, 4, 8, 16, 64};
  int trials = 1000;
  int ambient = 5;
  int subspaces = 3;
  int dim = 2;

  bool csv = true;
  bool timing = false;

  /// Every key/value as read, "section.key" → raw text.
  std::map<std::string, std::string> raw;
};

/// INI text with sections [generator], [system], [pattern], [sweep], [weave],
/// [signal], [erasure], [fallback], [packet], [output]. Unknown sections or
/// keys and malformed values raise ConfigError naming the key.
RunConfig parse_config(const std::string& text, const std::string& command);
/// Relative packet.file paths resolve against the config file directory.
RunConfig load_config(const std::string& path, const std::string& command);

WaveletGenerator make_wavelet(const GeneratorSpec& spec);
GaborGenerator make_gabor(const GeneratorSpec& spec);
WeavingPattern make_pattern(const PatternSpec& spec, int N);

}  // namespace frameweave
