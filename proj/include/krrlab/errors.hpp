#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace krrlab {

// Root of every error thrown by the library. The CLI maps the subclasses
// below onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand dimensions do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A scalar parameter is outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Closed-form peak formula evaluated where its denominator is not positive.
class OutOfRegimeError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Linearization coefficients violate alpha >= 0, beta > 0, gamma >= 0.
class ValidityError : public DomainError {
 public:
  using DomainError::DomainError;
};

class InsufficientSampleError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Input data is malformed or contains non-finite values.
class DataError : public Error {
 public:
  using Error::Error;
};

class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : DataError(what + " at line " + std::to_string(line)), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// Factorization of K + n*lambda*I failed even after the jitter retries.
class SingularityError : public NumericalError {
 public:
  SingularityError(const std::string& what, double smallest_eigenvalue)
      : NumericalError(what), smallest_eigenvalue_(smallest_eigenvalue) {}
  double smallest_eigenvalue() const { return smallest_eigenvalue_; }

 private:
  double smallest_eigenvalue_;
};

// A kernel evaluation produced NaN or Inf.
class EvaluationError : public NumericalError {
 public:
  EvaluationError(const std::string& what, std::size_t i, std::size_t j)
      : NumericalError(what + " at (" + std::to_string(i) + ", " +
                       std::to_string(j) + ")"),
        i_(i),
        j_(j) {}
  std::size_t row() const { return i_; }
  std::size_t col() const { return j_; }

 private:
  std::size_t i_;
  std::size_t j_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace krrlab
