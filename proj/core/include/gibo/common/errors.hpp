#pragma once

#include <stdexcept>
#include <string>

namespace gibo {

/// Gram matrix stayed indefinite after the full jitter escalation.
class SingularModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The suspension mechanism cannot reach the requested position.
class KinematicLockError : public std::runtime_error {
 public:
  KinematicLockError(const std::string& what, double travel);
  /// Offending wheel travel in meters, NaN when the lock was hit by a direct pose solve.
  double travel() const { return travel_; }

 private:
  double travel_;
};

/// A discipline model failed to produce outputs for a query.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gibo
