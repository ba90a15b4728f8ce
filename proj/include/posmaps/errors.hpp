#pragma once

#include <stdexcept>
#include <string>

namespace posmaps {

/// Malformed or out-of-contract input (wrong dimensions, non-finite entries,
/// zero vectors, violated construction invariants).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A map required to be completely positive has a Choi matrix with a
/// negative eigenvalue below tolerance.
class NotCompletelyPositive : public std::runtime_error {
 public:
  NotCompletelyPositive(const std::string& what, double min_eigenvalue)
      : std::runtime_error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

/// A mode-dependent precondition (trace preserving, unital, ...) failed.
class ModeError : public std::runtime_error {
 public:
  ModeError(const std::string& predicate, double residual)
      : std::runtime_error("mode precondition failed: " + predicate +
                           " (residual " + std::to_string(residual) + ")"),
        predicate_(predicate),
        residual_(residual) {}
  const std::string& predicate() const noexcept { return predicate_; }
  double residual() const noexcept { return residual_; }

 private:
  std::string predicate_;
  double residual_;
};

/// An affine map does not send the closed unit ball into itself.
class NotBallPositive : public std::runtime_error {
 public:
  explicit NotBallPositive(double max_norm)
      : std::runtime_error("map does not preserve the unit ball, max norm " +
                           std::to_string(max_norm)),
        max_norm_(max_norm) {}
  double max_norm() const noexcept { return max_norm_; }

 private:
  double max_norm_;
};

}  // namespace posmaps
