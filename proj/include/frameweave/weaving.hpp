#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "frameweave/frame_core.hpp"

namespace frameweave {

/// The family {V_{Nj+ℓ}}_j, V_m = span{D_{a^m} T_{kb} ψ}_k.
struct PacketFamily {
  SystemParams params;
  int family_index = 0;

  /// Dilation a^(Nj+ℓ) generating V_{Nj+ℓ}.
  double scale(int j) const;
  /// Index m of the space V_m contributed at position j.
  long space_index(int j) const { return static_cast<long>(params.N) * j + family_index; }
  double translation_step() const { return params.b; }
};

PacketFamily packet_family(const SystemParams& params, int ell);

/// Bounds valid simultaneously for every choice pattern.
struct WeaveCertificate {
  double L_weave = 0.0;
  double U_weave = 0.0;
  GridInfo grid;
  double tail_bound = 0.0;
  double argmin = 0.0;
  double argmax = 0.0;
  double refine_gain_min = 0.0;
  double refine_gain_max = 0.0;
  /// Pattern attaining the pointwise minimum at argmin, on `witness_window`.
  IndexRange witness_window;
  std::vector<int> witness_choices;
  bool certified = false;  // L_weave > tail_bound
};

double grid_tolerance(const WeaveCertificate& cert);

/// Frame bounds of the mixed system {D_{a^{ℓ_j}} D_{a^{Nj}} T_{kb} ψ}.
BoundsCertificate woven_bounds(const WaveletGenerator& gen, const SystemParams& params,
                               const WeavingPattern& pattern, int grid_points);

/// (1/b)·inf Σ_j min_ℓ |ψ̂(γ a^{-(Nj+ℓ)})|² and (1/b)·sup Σ_j max_ℓ (…), swept
/// over one period a^N. Each summand depends on a single ℓ_j, so these bound
/// the multiplier of every pattern pointwise.
WeaveCertificate weave_certificate(const WaveletGenerator& gen, const SystemParams& params,
                                   int grid_points);
WeaveCertificate weave_certificate(const WaveletGenerator& gen, const SystemParams& params,
                                   const SweepOptions& options);

/// Per-γ rows of the adversary sweep (for CSV export).
struct WitnessRow {
  double gamma;
  double min_sum;
  double max_sum;
  std::vector<int> argmin_choices;  // over the effective rows at γ
  int first_row;
};
std::vector<WitnessRow> weave_witness_curve(const WaveletGenerator& gen,
                                            const SystemParams& params, int grid_points);

struct PatternBounds {
  std::vector<int> choices;
  double A = 0.0;
  double B = 0.0;
  double refine_gain = 0.0;  // max of the two refinement gains
};

struct SamplingReport {
  int count = 0;
  std::uint64_t seed = 0;
  IndexRange window;
  WeaveCertificate certificate;
  double tolerance = 0.0;
  double min_A = 0.0;
  double max_B = 0.0;
  PatternBounds worst_lower;  // pattern attaining min_A
  PatternBounds worst_upper;  // pattern attaining max_B
  int violations = 0;
  bool all_within = false;
  std::vector<PatternBounds> patterns;  // in draw order
};

/// Draws `count` uniform zero-extended patterns on `window` from a
/// mt19937_64 seeded with `seed` (choice = draw mod N, window order) and
/// checks every pair (A, B) against the weave certificate.
SamplingReport sample_patterns(const WaveletGenerator& gen, const SystemParams& params, int count,
                               std::uint64_t seed, IndexRange window,
                               const SweepOptions& options = {});

struct EnumerationReport {
  std::uint64_t pattern_count = 0;
  IndexRange window;
  WeaveCertificate certificate;
  double tolerance = 0.0;
  double min_A = 0.0;
  double max_B = 0.0;
  PatternBounds worst_lower;
  PatternBounds worst_upper;
  double certificate_gap = 0.0;  // min_A − L_weave
  int violations = 0;
  bool all_within = false;
};

/// Exhaustive sweep over all N^|window| zero-extended patterns.
/// Throws std::invalid_argument when N^|window| > 10^6.
EnumerationReport enumerate_patterns(const WaveletGenerator& gen, const SystemParams& params,
                                     IndexRange window, const SweepOptions& options = {});

/// Bounds of one zero-extended window pattern evaluated on the shared window
/// grid used by sample_patterns / enumerate_patterns.
class PatternTable {
 public:
  PatternTable(const WaveletGenerator& gen, const SystemParams& params, IndexRange window,
               const SweepOptions& options, std::optional<double> tail_target = std::nullopt);

  PatternBounds evaluate(const std::vector<int>& choices) const;
  IndexRange window() const noexcept { return window_; }
  std::size_t grid_size() const noexcept { return grid_.size(); }
  double tail_bound() const noexcept { return depth_.tail_bound; }
  const SweepPlan& plan() const noexcept { return plan_; }

 private:
  const WaveletGenerator& gen_;
  SystemParams params_;
  IndexRange window_;
  SweepOptions options_;
  SweepPlan plan_;
  TruncationDepth depth_;
  std::vector<double> grid_;      // positive segment, then mirrored when needed
  std::vector<double> base_;      // Σ over rows outside the window (ℓ = 0)
  std::vector<double> table_;     // window rows × N choices × grid
};

}  // namespace frameweave
