#include "frameweave/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace frameweave {

void SystemParams::validate() const {
  if (!(a > 1.0) || !std::isfinite(a)) throw std::invalid_argument("a must be > 1");
  if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("b must be > 0");
  if (N < 1) throw std::invalid_argument("N must be >= 1");
}

WeavingPattern::WeavingPattern(int order, int first, std::vector<int> choices, Extension ext)
    : order_(order), first_(first), choices_(std::move(choices)), extension_(ext) {
  if (order_ < 1) throw std::invalid_argument("pattern order must be >= 1");
  for (const int c : choices_) {
    if (c < 0 || c >= order_) {
      throw std::invalid_argument("pattern choice " + std::to_string(c) + " outside {0,...," +
                                  std::to_string(order_ - 1) + "}");
    }
  }
  if (extension_ == Extension::Periodic && choices_.empty()) {
    throw std::invalid_argument("periodic pattern needs a non-empty window");
  }
}

WeavingPattern WeavingPattern::constant(int order, int value) {
  return WeavingPattern(order, 0, {value}, Extension::Periodic);
}

WeavingPattern WeavingPattern::windowed(int order, int first, std::vector<int> choices,
                                        Extension extension) {
  return WeavingPattern(order, first, std::move(choices), extension);
}

WeavingPattern WeavingPattern::alternating(int order, IndexRange window) {
  std::vector<int> c;
  c.reserve(static_cast<std::size_t>(window.size()));
  for (int j = window.first; j <= window.last; ++j) c.push_back(((j % order) + order) % order);
  return WeavingPattern(order, window.first, std::move(c), Extension::Zero);
}

int WeavingPattern::choice(int j) const noexcept {
  const int n = static_cast<int>(choices_.size());
  if (n == 0) return 0;
  const int off = j - first_;
  if (off >= 0 && off < n) return choices_[static_cast<std::size_t>(off)];
  if (extension_ == Extension::Zero) return 0;
  return choices_[static_cast<std::size_t>(((off % n) + n) % n)];
}

bool WeavingPattern::is_periodic() const noexcept {
  if (extension_ == Extension::Periodic) return true;
  return std::all_of(choices_.begin(), choices_.end(), [](int c) { return c == 0; });
}

int WeavingPattern::period() const noexcept {
  if (extension_ == Extension::Periodic) return static_cast<int>(choices_.size());
  return 1;
}

}  // namespace frameweave
