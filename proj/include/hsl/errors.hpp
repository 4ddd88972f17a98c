#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hsl {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain (t <= 0, |x| >= 1, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Request too large to enumerate or integrate (unbounded cell lists, m > 3).
class CapacityError : public Error {
public:
  using Error::Error;
};

/// Bad numerical parameter (empty grid, underflowing probe radius, ...).
class ParameterError : public Error {
public:
  using Error::Error;
};

/// Operation not available for this input (exact gradient of a family without one).
class UnsupportedError : public Error {
public:
  using Error::Error;
};

/// Coefficient tables of different shapes combined.
class ShapeError : public Error {
public:
  using Error::Error;
};

/// Truncated series cannot meet the requested tolerance.
class TruncationError : public Error {
public:
  using Error::Error;
};

/// A quadrature node produced a non-finite integrand value.
class EvaluationError : public Error {
public:
  EvaluationError(const std::string& what, std::vector<double> node)
      : Error(what), node_(std::move(node)) {}
  const std::vector<double>& node() const noexcept { return node_; }

private:
  std::vector<double> node_;
};

/// Integral or measure that does not converge. Carries the per-level values
/// that showed the growth, when there are any.
class DivergenceError : public Error {
public:
  explicit DivergenceError(const std::string& what, std::vector<double> levels = {})
      : Error(what), levels_(std::move(levels)) {}
  const std::vector<double>& levels() const noexcept { return levels_; }

private:
  std::vector<double> levels_;
};

/// Unknown check id, missing argument and the like (CLI exit code 2).
class UsageError : public Error {
public:
  using Error::Error;
};

/// Malformed configuration or measure file.
class ParseError : public Error {
public:
  ParseError(const std::string& what, int line) : Error(what), line_(line) {}
  int line() const noexcept { return line_; }

private:
  int line_;
};

}  // namespace hsl
