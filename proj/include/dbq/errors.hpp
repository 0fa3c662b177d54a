#pragma once

#include <stdexcept>
#include <string>

namespace dbq {

// Raised when a run leaves the small-data regime: non-finite values or a
// norm past the configured guard. Carries the simulation time of detection.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

// Numerical procedure failed to reach its tolerance (quadrature tail check,
// step-size underflow).
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dbq
