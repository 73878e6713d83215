#pragma once

#include <stdexcept>
#include <string>

namespace nrnet {

/// Error categories; the CLI maps them to exit codes 2, 3, 3 and 4.
enum class ErrorKind { parameter, singular, numerical, io };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Value outside the parameter domain, or an operation asked for outside its regime.
class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& what) : Error(ErrorKind::parameter, what) {}
};

class UnsupportedRegimeError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

class NoEdgeStateError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// The dynamic matrix (or a closed-form denominator) is exactly singular.
class SingularityError : public Error {
 public:
  explicit SingularityError(const std::string& what) : Error(ErrorKind::singular, what) {}
};

/// Iterations that failed to converge, degenerate fits, missing roots.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::numerical, what) {}
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double residual)
      : NumericalError(what), residual_(residual) {}
  [[nodiscard]] double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class AtTransitionError : public NumericalError {
 public:
  AtTransitionError(const std::string& what, double min_abs, double k_at_min)
      : NumericalError(what), min_abs_(min_abs), k_at_min_(k_at_min) {}
  [[nodiscard]] double min_abs() const noexcept { return min_abs_; }
  [[nodiscard]] double k_at_min() const noexcept { return k_at_min_; }

 private:
  double min_abs_;
  double k_at_min_;
};

class FitDegenerateError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NotFoundError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

}  // namespace nrnet
