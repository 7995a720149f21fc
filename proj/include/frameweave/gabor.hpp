#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "frameweave/frame_core.hpp"
#include "frameweave/generators.hpp"
#include "frameweave/pattern.hpp"
#include "frameweave/weaving.hpp"

namespace frameweave {

/// {E_{mb} T_{γ_n} g}, γ_n = n·N·a + ℓ_n·a.
struct GaborSystem {
  GaborGenerator gen;
  double a = 1.0;
  double b = 1.0;
  int N = 1;
  WeavingPattern pattern = WeavingPattern::constant(1, 0);
  /// Keep only n in this range (a finite section). Bounds are then computed
  /// on the interior span, where no missing translate could contribute.
  std::optional<IndexRange> truncation;

  void validate() const;
  bool painless() const;
  double node(long n) const;
};

struct DensityGate {
  bool ok = false;
  double product = 0.0;  // a·b·N
  std::string message;
};

/// a·b·N ≤ 1 (necessary for the woven translate packets to be frames).
DensityGate density_gate(double a, double b, int N);

/// (1/b) Σ_n |g(x − γ_n)|². Throws PreconditionError unless b ≤ 1/|I|.
double time_multiplier(const GaborSystem& system, double x);

/// Uniform x-grid sweep. Periodic patterns: one period [0, P·N·a). Zero
/// extended windows: the window's span plus one period on each side.
/// Truncated systems: the interior span, flagged interior_only.
BoundsCertificate gabor_frame_bounds(const GaborSystem& system, int grid_points);

/// (1/b) inf/sup over x ∈ [0, Na) of Σ_n min/max_ℓ |g(x − nNa − ℓa)|².
WeaveCertificate gabor_weave_certificate(const GaborGenerator& gen, double a, double b, int N,
                                         int grid_points);

struct CoverReport {
  Interval base_interval;         // [0, aN]
  Interval strengthened_interval;  // [0, (2N−1)a]
  Interval cover;
  double floor_eps = 0.0;
  bool base_ok = false;
  bool strengthened_ok = false;
};

/// |g| ≥ ε on both intervals, read almost everywhere (right endpoints excluded).
CoverReport verify_cover(const GaborGenerator& gen, double a, int N);

/// Multiplier samples on the gabor_frame_bounds grid (for CSV export).
Curve gabor_multiplier_curve(const GaborSystem& system, int grid_points);

/// Random zero-extended translate patterns checked against the certificate.
SamplingReport gabor_sample_patterns(const GaborGenerator& gen, double a, double b, int N,
                                     int count, std::uint64_t seed, IndexRange window,
                                     int grid_points);

}  // namespace frameweave
