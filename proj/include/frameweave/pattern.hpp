#pragma once

#include <vector>

namespace frameweave {

/// Closed integer range [first, last]; empty when last < first.
struct IndexRange {
  int first = 0;
  int last = -1;

  int size() const noexcept { return last >= first ? last - first + 1 : 0; }
  bool empty() const noexcept { return last < first; }
  bool contains(int j) const noexcept { return j >= first && j <= last; }
};

struct SystemParams {
  double a = 2.0;  // dilation base (> 1) or, for Gabor systems, translation step
  double b = 0.5;  // translation (wavelet) or modulation (Gabor) step
  int N = 1;       // weaving order

  /// Throws std::invalid_argument unless a > 1, b > 0, N ≥ 1.
  void validate() const;
};

/// How a pattern continues outside its stored window.
enum class Extension { Zero, Periodic };

/// A choice ℓ_j ∈ {0, …, N-1} for every integer j, stored on a finite window
/// and extended by the given rule. The partition σ_k = {j : ℓ_j = k}.
class WeavingPattern {
 public:
  static WeavingPattern constant(int order, int value);
  static WeavingPattern windowed(int order, int first, std::vector<int> choices,
                                 Extension extension = Extension::Zero);
  /// ℓ_j = j mod N on the window, zero outside.
  static WeavingPattern alternating(int order, IndexRange window);

  int order() const noexcept { return order_; }
  IndexRange window() const noexcept { return {first_, first_ + static_cast<int>(choices_.size()) - 1}; }
  const std::vector<int>& choices() const noexcept { return choices_; }
  Extension extension() const noexcept { return extension_; }

  int choice(int j) const noexcept;

  /// True when the extended pattern is periodic in j (periodic extension, or
  /// a zero-extended window that is itself all zeros).
  bool is_periodic() const noexcept;
  /// Period in j; meaningful only when is_periodic().
  int period() const noexcept;

 private:
  WeavingPattern(int order, int first, std::vector<int> choices, Extension ext);

  int order_;
  int first_;
  std::vector<int> choices_;
  Extension extension_;
};

}  // namespace frameweave
