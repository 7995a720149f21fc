#pragma once

#include <variant>

namespace frameweave {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const noexcept { return hi - lo; }
  bool contains_closed(double x) const noexcept { return lo <= x && x <= hi; }
  bool contains_half_open(double x) const noexcept { return lo <= x && x < hi; }
};

/// Constants of the two-sided power envelope C|γ|^β ≤ |ψ̂(γ)| ≤ D|γ|^α,
/// claimed on the neighbourhood U = [-u_radius, u_radius].
struct Envelope {
  double C = 1.0;
  double D = 1.0;
  double alpha = 1.0;
  double beta = 1.0;
  double u_radius = 1.0;
};

/// ψ̂(γ) = |γ|^alpha on [-cutoff, cutoff].
struct PowerLawProfile {
  double alpha;
  double cutoff;
};

/// ψ̂(γ) = height on the closed band [lo, hi].
struct BandProfile {
  double lo;
  double hi;
  double height;
};

using FreqProfile = std::variant<PowerLawProfile, BandProfile>;

/// Frequency-side description of a wavelet ψ. Immutable once built.
class WaveletGenerator {
 public:
  WaveletGenerator(FreqProfile profile, Envelope envelope);

  /// ψ̂(γ); exactly zero outside the support.
  double operator()(double gamma) const noexcept;
  /// |ψ̂(γ)|².
  double power(double gamma) const noexcept {
    const double v = (*this)(gamma);
    return v * v;
  }

  const FreqProfile& profile() const noexcept { return profile_; }
  const Envelope& envelope() const noexcept { return envelope_; }
  const Interval& support() const noexcept { return support_; }
  double sup_norm() const noexcept { return sup_norm_; }

  /// max |γ| over the support.
  double outer_radius() const noexcept;
  /// Largest r with ψ̂ ≡ 0 on (-r, r); zero when the support touches the origin.
  double inner_radius() const noexcept;
  bool is_even() const noexcept;

  /// Same profile with a different claimed envelope.
  WaveletGenerator with_envelope(Envelope envelope) const;

 private:
  FreqProfile profile_;
  Envelope envelope_;
  Interval support_;
  double sup_norm_;
};

WaveletGenerator make_powerlaw_wavelet(double alpha, double cutoff);

/// Indicator of [lo, hi] on the frequency side. The default claimed envelope
/// (C = D = 1, α = β = 1, U = [-max|γ|, max|γ|]) generally fails validation;
/// the band family exists for support and failure-mode experiments.
WaveletGenerator make_band_wavelet(double lo, double hi, double height = 1.0);

double eval_freq(const WaveletGenerator& gen, double gamma);

struct EnvelopeReport {
  int grid_points = 0;
  bool lower_ok = true;
  bool upper_ok = true;
  double worst_lower_gamma = 0.0;   // γ maximising C|γ|^β − |ψ̂(γ)|
  double worst_lower_excess = 0.0;  // > 0 means a violation
  double worst_upper_gamma = 0.0;   // γ maximising |ψ̂(γ)| − D|γ|^α
  double worst_upper_excess = 0.0;
  bool support_ok = true;           // ψ̂ vanishes off the support
  bool sup_norm_ok = true;

  bool passed() const noexcept { return lower_ok && upper_ok && support_ok && sup_norm_ok; }
};

/// Checks the envelope on grid_points uniformly spaced points of (0, u] and
/// their mirrors; γ = 0 is never tested. Failures are reported, not thrown.
EnvelopeReport validate_envelope(const WaveletGenerator& gen, int grid_points);

/// Time-side window g = height · 1_[start, start + length).
class GaborGenerator {
 public:
  GaborGenerator(double start, double length, double height = 1.0);

  double operator()(double x) const noexcept {
    return (x >= start_ && x < start_ + length_) ? height_ : 0.0;
  }
  double power(double x) const noexcept {
    const double v = (*this)(x);
    return v * v;
  }

  /// Closed support interval I.
  Interval support() const noexcept { return {start_, start_ + length_}; }
  /// Half-open interval on which |g| ≥ floor_eps.
  Interval cover_interval() const noexcept { return {start_, start_ + length_}; }
  double floor_eps() const noexcept { return height_; }
  double sup_norm() const noexcept { return height_; }
  double start() const noexcept { return start_; }
  double length() const noexcept { return length_; }

  /// True when |g| ≥ floor_eps on the half-open interval [lo, hi).
  bool floor_holds_on(Interval half_open) const noexcept;

 private:
  double start_;
  double length_;
  double height_;
};

GaborGenerator make_indicator_gabor(double length);

}  // namespace frameweave
