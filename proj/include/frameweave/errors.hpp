#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace frameweave {

// Invalid arguments are reported with std::invalid_argument. The types below
// cover the remaining failure modes callers may want to tell apart.

/// A documented precondition of an operation does not hold (e.g. the
/// translation step is outside the painless range).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Iterative method hit its cap. Carries whatever history it had.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), history_(std::move(history)) {}
  const std::vector<double>& history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
};

/// Division by a multiplier that is not bounded away from zero.
class NotInvertibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotAFusionFrameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotAnInformationPacketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace frameweave
