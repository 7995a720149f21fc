#include "frameweave/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace frameweave {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) + " must be positive and finite");
  }
}

Interval support_of(const FreqProfile& p) {
  if (const auto* pl = std::get_if<PowerLawProfile>(&p)) return {-pl->cutoff, pl->cutoff};
  const auto& band = std::get<BandProfile>(p);
  return {band.lo, band.hi};
}

double sup_of(const FreqProfile& p) {
  if (const auto* pl = std::get_if<PowerLawProfile>(&p)) return std::pow(pl->cutoff, pl->alpha);
  return std::abs(std::get<BandProfile>(p).height);
}

}  // namespace

WaveletGenerator::WaveletGenerator(FreqProfile profile, Envelope envelope)
    : profile_(profile), envelope_(envelope), support_(support_of(profile)),
      sup_norm_(sup_of(profile)) {
  if (const auto* pl = std::get_if<PowerLawProfile>(&profile_)) {
    require_positive(pl->alpha, "alpha");
    require_positive(pl->cutoff, "cutoff");
  } else {
    const auto& band = std::get<BandProfile>(profile_);
    if (!(band.lo < band.hi) || !std::isfinite(band.lo) || !std::isfinite(band.hi)) {
      throw std::invalid_argument("band requires finite lo < hi");
    }
  }
  require_positive(envelope_.C, "C");
  require_positive(envelope_.D, "D");
  require_positive(envelope_.alpha, "envelope alpha");
  require_positive(envelope_.beta, "envelope beta");
  require_positive(envelope_.u_radius, "u_radius");
}

double WaveletGenerator::operator()(double gamma) const noexcept {
  if (const auto* pl = std::get_if<PowerLawProfile>(&profile_)) {
    const double g = std::abs(gamma);
    return g <= pl->cutoff ? std::pow(g, pl->alpha) : 0.0;
  }
  const auto& band = std::get<BandProfile>(profile_);
  return (gamma >= band.lo && gamma <= band.hi) ? band.height : 0.0;
}

double WaveletGenerator::outer_radius() const noexcept {
  return std::max(std::abs(support_.lo), std::abs(support_.hi));
}

double WaveletGenerator::inner_radius() const noexcept {
  if (support_.lo <= 0.0 && support_.hi >= 0.0) return 0.0;
  return std::min(std::abs(support_.lo), std::abs(support_.hi));
}

bool WaveletGenerator::is_even() const noexcept {
  if (std::holds_alternative<PowerLawProfile>(profile_)) return true;
  return support_.lo == -support_.hi;
}

WaveletGenerator WaveletGenerator::with_envelope(Envelope envelope) const {
  return WaveletGenerator(profile_, envelope);
}

WaveletGenerator make_powerlaw_wavelet(double alpha, double cutoff) {
  require_positive(alpha, "alpha");
  require_positive(cutoff, "cutoff");
  return WaveletGenerator(PowerLawProfile{alpha, cutoff},
                          Envelope{1.0, 1.0, alpha, alpha, cutoff});
}

WaveletGenerator make_band_wavelet(double lo, double hi, double height) {
  const double r = std::max(std::abs(lo), std::abs(hi));
  return WaveletGenerator(BandProfile{lo, hi, height}, Envelope{1.0, 1.0, 1.0, 1.0, r});
}

double eval_freq(const WaveletGenerator& gen, double gamma) { return gen(gamma); }

EnvelopeReport validate_envelope(const WaveletGenerator& gen, int grid_points) {
  if (grid_points < 2) throw std::invalid_argument("grid_points must be at least 2");
  const Envelope& env = gen.envelope();
  EnvelopeReport rep;
  rep.grid_points = grid_points;
  rep.worst_lower_excess = -std::numeric_limits<double>::infinity();
  rep.worst_upper_excess = -std::numeric_limits<double>::infinity();

  // Relative slack so that the equality case (power law with C = D = 1)
  // is not flagged on rounding.
  constexpr double kSlack = 1e-12;
  for (int i = 1; i <= grid_points; ++i) {
    const double mag = env.u_radius * static_cast<double>(i) / grid_points;
    for (const double g : {mag, -mag}) {
      const double v = std::abs(gen(g));
      const double lower = env.C * std::pow(mag, env.beta);
      const double upper = env.D * std::pow(mag, env.alpha);
      const double lo_excess = lower - v;
      const double up_excess = v - upper;
      if (lo_excess > rep.worst_lower_excess) {
        rep.worst_lower_excess = lo_excess;
        rep.worst_lower_gamma = g;
      }
      if (up_excess > rep.worst_upper_excess) {
        rep.worst_upper_excess = up_excess;
        rep.worst_upper_gamma = g;
      }
      if (lo_excess > kSlack * std::max(1.0, lower)) rep.lower_ok = false;
      if (up_excess > kSlack * std::max(1.0, upper)) rep.upper_ok = false;
    }
  }

  // Support and sup-norm checks on a grid that extends past the support.
  const Interval sup = gen.support();
  const double span = sup.length();
  for (int i = 0; i <= grid_points; ++i) {
    const double g = sup.lo - 0.5 * span + 2.0 * span * static_cast<double>(i) / grid_points;
    const double v = std::abs(gen(g));
    if (!sup.contains_closed(g) && v != 0.0) rep.support_ok = false;
    if (v > gen.sup_norm() * (1.0 + kSlack)) rep.sup_norm_ok = false;
  }
  return rep;
}

GaborGenerator::GaborGenerator(double start, double length, double height)
    : start_(start), length_(length), height_(height) {
  require_positive(length, "length");
  require_positive(height, "height");
  if (!std::isfinite(start)) throw std::invalid_argument("start must be finite");
}

bool GaborGenerator::floor_holds_on(Interval half_open) const noexcept {
  if (!(half_open.lo < half_open.hi)) return true;
  return half_open.lo >= start_ && half_open.hi <= start_ + length_;
}

GaborGenerator make_indicator_gabor(double length) {
  require_positive(length, "length");
  return GaborGenerator(0.0, length, 1.0);
}

}  // namespace frameweave
