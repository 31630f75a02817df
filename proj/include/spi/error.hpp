#pragma once

#include <cstddef>
#include <exception>
#include <stdexcept>
#include <string>

namespace spi {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside a model's CGF domain, or invalid parameters.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// exp(K(is)) overflowed or produced NaN.
class NonFiniteCfError : public Error {
 public:
  NonFiniteCfError(const std::string& what, double s) : Error(what), s_(s) {}
  double s() const noexcept { return s_; }

 private:
  double s_;
};

// The saddlepoint iteration ran out of iterations; carries the best iterate.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_tau, double best_residual)
      : Error(what), best_tau_(best_tau), best_residual_(best_residual) {}
  double best_tau() const noexcept { return best_tau_; }
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_tau_;
  double best_residual_;
};

// x0 lies outside the range of K' over the domain.
class UnattainableMeanError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double abscissa) : Error(what), abscissa_(abscissa) {}
  double abscissa() const noexcept { return abscissa_; }

 private:
  double abscissa_;
};

// Non-positive p-bar(0) from the SPI quadrature.
class InversionError : public Error {
 public:
  using Error::Error;
};

// Finite-difference Hessian that is not positive definite at the optimum.
class HessianError : public Error {
 public:
  HessianError(const std::string& what, double min_eigenvalue) : Error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

// Malformed input file. line is 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line) : Error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A per-observation failure inside a likelihood sum. cause() holds the
// original error so callers can still classify it.
class ObservationError : public Error {
 public:
  ObservationError(const std::string& what, std::size_t index, std::exception_ptr cause)
      : Error(what), index_(index), cause_(std::move(cause)) {}
  std::size_t index() const noexcept { return index_; }
  const std::exception_ptr& cause() const noexcept { return cause_; }

 private:
  std::size_t index_;
  std::exception_ptr cause_;
};

}  // namespace spi
