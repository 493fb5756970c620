#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace imbibe {

/// Base of every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI error report.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

/// Input or parameter fails a documented invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "ValidationError"; }
};

/// Function evaluated outside its mathematical domain (e.g. P_c at s <= s_R).
class DomainError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "DomainError"; }
};

/// Requested time step exceeds the explicit-scheme stability bound.
class CflViolation : public Error {
 public:
  CflViolation(double requested, double bound)
      : Error("time step " + std::to_string(requested) + " s exceeds the stable bound " +
              std::to_string(bound) + " s"),
        requested_(requested),
        bound_(bound) {}
  const char* kind() const noexcept override { return "CflViolation"; }
  double requested() const noexcept { return requested_; }
  double bound() const noexcept { return bound_; }

 private:
  double requested_;
  double bound_;
};

/// Forward solve produced NaN/Inf.
class NonFiniteState : public Error {
 public:
  explicit NonFiniteState(std::size_t step)
      : Error("non-finite state detected at step " + std::to_string(step)), step_(step) {}
  const char* kind() const noexcept override { return "NonFiniteState"; }
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Optimizer could not produce a usable result.
class CalibrationFailure : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "CalibrationFailure"; }
};

}  // namespace imbibe
