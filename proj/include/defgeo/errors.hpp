#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace defgeo {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is the byte position of the problem.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(message + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownIdentifierError : public ParseError {
 public:
  UnknownIdentifierError(const std::string& name, std::size_t offset)
      : ParseError("unknown identifier '" + name + "'", offset), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Anything that fails while crunching numbers: domain errors, stencils
/// leaving the chart, singular metrics, failed recoveries.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class DomainError : public NumericalError {
 public:
  DomainError(const std::string& message, std::string subexpression, std::string point)
      : NumericalError(message + " in '" + subexpression + "' at " + point),
        subexpression_(std::move(subexpression)),
        point_(std::move(point)) {}
  const std::string& subexpression() const noexcept { return subexpression_; }
  const std::string& point() const noexcept { return point_; }

 private:
  std::string subexpression_;
  std::string point_;
};

class StencilError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularMetricError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class RecoveryError : public NumericalError {
 public:
  RecoveryError(const std::string& message, double condition_number)
      : NumericalError(message + " (condition number " + std::to_string(condition_number) + ")"),
        condition_number_(condition_number) {}
  double condition_number() const noexcept { return condition_number_; }

 private:
  double condition_number_;
};

/// A deformation field that is not a pure (g-bar symmetric, positive) deformation.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& message, std::string worst_point, double defect)
      : Error(message + " (worst point " + worst_point + ", defect " + std::to_string(defect) + ")"),
        worst_point_(std::move(worst_point)),
        defect_(defect) {}
  const std::string& worst_point() const noexcept { return worst_point_; }
  double defect() const noexcept { return defect_; }

 private:
  std::string worst_point_;
  double defect_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace defgeo
