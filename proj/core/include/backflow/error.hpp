#pragma once

#include <stdexcept>
#include <string>

namespace backflow {

/// Coarse classification used by front ends to pick an exit status.
enum class ErrorKind {
  Config,     ///< bad user input or an out-of-contract argument
  Numerical,  ///< a computation failed to reach its accuracy target
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

/// Precondition violated by the caller.
class ContractViolation : public Error {
 public:
  explicit ContractViolation(const std::string& what)
      : Error(ErrorKind::Config, "contract violation: " + what) {}
};

/// A state could not be built (zero norm, classical point of an epsilon family).
class DegenerateStateError : public Error {
 public:
  explicit DegenerateStateError(const std::string& what)
      : Error(ErrorKind::Config, "degenerate state: " + what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

/// Non-finite integrand or function value.
class DomainError : public NumericalError {
 public:
  explicit DomainError(const std::string& what) : NumericalError("domain error: " + what) {}
};

/// Result would overflow double precision.
class RangeError : public NumericalError {
 public:
  explicit RangeError(const std::string& what) : NumericalError("range error: " + what) {}
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double residual)
      : NumericalError("convergence error: " + what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Grid or quadrature too coarse for the requested tolerance.
class ResolutionError : public NumericalError {
 public:
  explicit ResolutionError(const std::string& what)
      : NumericalError("resolution error: " + what) {}
};

}  // namespace backflow
