#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "frameweave/generators.hpp"
#include "frameweave/kernels.hpp"
#include "frameweave/pattern.hpp"

namespace frameweave {

struct SweepOptions {
  int grid_points = 4096;      // per multiplicative period a^N
  int refine_points = 256;     // one local pass around each extremum
  double tail_relative = 1e-12;
};

struct GridInfo {
  double lo = 0.0;             // first grid abscissa (|γ| or x)
  double hi = 0.0;             // end of the swept range (exclusive)
  int points = 0;              // per sign
  int periods = 1;             // multiplicative (wavelet) or additive (Gabor) periods covered
  bool log_spaced = true;
  bool both_signs = false;
};

/// Frame bounds with the metadata needed to judge them.
struct BoundsCertificate {
  double A_num = 0.0;
  double B_num = 0.0;
  std::optional<double> A_analytic;
  std::optional<double> B_analytic;
  std::optional<int> J_const;
  std::optional<int> K_const;
  std::optional<double> L_weave;
  std::optional<double> U_weave;
  GridInfo grid;
  double tail_bound = 0.0;
  int j_min_eff = 0;
  int j_max_eff = 0;
  double argmin = 0.0;           // abscissa of A_num
  double argmax = 0.0;           // abscissa of B_num
  double refine_gain_min = 0.0;  // grid minimum − refined minimum (≥ 0)
  double refine_gain_max = 0.0;  // refined maximum − grid maximum (≥ 0)
  bool certified = false;        // A_num > tail_bound
  bool interior_only = false;    // sweep restricted to the interior of a truncated system
};

/// Tolerance for comparing bounds computed on different grids: the observed
/// refinement gains bound the grid error near the extrema.
double grid_tolerance(const BoundsCertificate& cert);

/// 1/|I|, the largest translation step for which cross terms vanish.
double admissible_b(const WaveletGenerator& gen);
/// b ≤ 1/|I| (up to one part in 10^12).
bool is_painless(const WaveletGenerator& gen, const SystemParams& params);

/// Σ_{0<|k|≤k_max} Σ_j |ψ̂(γ/λ_j) ψ̂(γ/λ_j + k/b)| over the pattern window and
/// the effective range at γ.
double cross_term_sum(const WaveletGenerator& gen, const SystemParams& params,
                      const WeavingPattern& pattern, double gamma, int k_max);

/// m(γ) = (1/b) Σ_j |ψ̂(γ/λ_j)|², λ_j = a^(ℓ_j + N j), truncated per
/// truncation_level. Throws PreconditionError outside the painless range.
double multiplier(const WaveletGenerator& gen, const SystemParams& params,
                  const WeavingPattern& pattern, double gamma);

/// (1/b) Σ |ψ̂(γ/λ)|² over an explicit finite list of dilations.
double multiplier_for_dilations(const WaveletGenerator& gen, double b,
                                std::span<const double> lambdas, double gamma);

/// Per-γ summation depth: rows j < j0(γ) − below vanish identically, rows
/// j > j0(γ) + above are bounded in total by tail_bound.
struct TruncationDepth {
  int below = 0;
  int above = 0;
  double tail_bound = 0.0;
};

struct TruncationLevel {
  int j_min_eff = 0;
  int j_max_eff = 0;
  double tail_bound = 0.0;
};

/// Depth meeting an absolute tail target (default: tail_relative times a
/// lower estimate of A).
TruncationDepth truncation_depth(const WaveletGenerator& gen, const SystemParams& params,
                                 std::optional<double> tail_target = std::nullopt);

/// Tail remainder when summing `above` rows past j0(γ).
double tail_bound_for_depth(const WaveletGenerator& gen, const SystemParams& params, int above);

/// gamma_range is read as a range of |γ|; it must exclude 0.
TruncationLevel truncation_level(const WaveletGenerator& gen, const SystemParams& params,
                                 const WeavingPattern& pattern, Interval gamma_range,
                                 std::optional<double> tail_target = std::nullopt);

struct AnalyticBounds {
  double A = 0.0;
  double B = 0.0;
  int J = 0;
  int K = 0;
};

/// Closed-form bounds from the envelope constants:
///   A = (1/b) C² a^(−2βN) / a^(2β(N−1−NJ)),
///   B = (1/b) (D² a^(2αNJ) / (1 − a^(−2αN)) + K ‖ψ̂‖∞²),
/// J the largest integer with a^(NJ) ≤ u_radius, K the smallest positive
/// integer for which ±[a^(N(J−1+K)), a^(N(J+K))] misses the closed support.
AnalyticBounds analytic_bounds(const WaveletGenerator& gen, const SystemParams& params);

/// Log-spaced sweep layout. Periodic patterns sweep `periods` copies of the
/// multiplicative period q = a^N starting at the support radius; zero-extended
/// windows sweep the window's induced range plus one period on each side.
struct SweepPlan {
  double lo = 1.0;
  double q = 2.0;
  int periods = 1;
  int points = 0;      // total per sign
  bool periodic = true;
  bool both_signs = false;

  std::vector<double> abscissae() const;
  double period_factor() const;  // q^periods
};

SweepPlan plan_sweep(const WaveletGenerator& gen, const SystemParams& params,
                     const WeavingPattern& pattern, int grid_points);
/// One-period plan used by the weaving certificate.
SweepPlan plan_period(const WaveletGenerator& gen, const SystemParams& params, int grid_points);

/// Ladder holding λ_j = a^(N j + ℓ_j) for every row a sweep over `plan` (and
/// its refinement neighbourhood) can touch.
kernels::Ladder pattern_ladder(const SystemParams& params, const WeavingPattern& pattern,
                               const SweepPlan& plan, const TruncationDepth& depth);
/// Ladder with all N choices per row (adversary sweeps).
kernels::Ladder choice_ladder(const SystemParams& params, const SweepPlan& plan,
                              const TruncationDepth& depth);

/// Multiplier curve on the plan's positive grid (then the mirrored grid when
/// the generator is not even).
struct Curve {
  std::vector<double> abscissae;
  std::vector<double> values;
};
Curve multiplier_curve(const WaveletGenerator& gen, const SystemParams& params,
                       const WeavingPattern& pattern, int grid_points);

namespace detail {
/// Shared argument checks for multiplier sweeps: valid parameters, painless
/// regime, sane options, ψ̂(0) = 0 and a holding upper envelope.
void check_sweep_inputs(const WaveletGenerator& gen, const SystemParams& params,
                        const SweepOptions& options);
}  // namespace detail

BoundsCertificate frame_bounds(const WaveletGenerator& gen, const SystemParams& params,
                               const WeavingPattern& pattern, int grid_points);
BoundsCertificate frame_bounds(const WaveletGenerator& gen, const SystemParams& params,
                               const WeavingPattern& pattern, const SweepOptions& options);

}  // namespace frameweave
