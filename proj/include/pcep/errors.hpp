#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pcep {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file (missing or non-numeric cell).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row, std::string column)
      : Error(what), row_(row), column_(std::move(column)) {}
  std::size_t row() const { return row_; }
  const std::string& column() const { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a density, transform or hyperparameter.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Rank-deficient design. Carries the model bitmask when known.
class SingularityError : public Error {
 public:
  explicit SingularityError(const std::string& what, std::uint64_t gamma = 0)
      : Error(what), gamma_(gamma) {}
  std::uint64_t gamma() const { return gamma_; }

 private:
  std::uint64_t gamma_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what, std::uint64_t gamma = 0)
      : Error(what), gamma_(gamma) {}
  std::uint64_t gamma() const { return gamma_; }

 private:
  std::uint64_t gamma_;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

/// Residual sum of squares is zero, so a score based on log(RSS) is undefined.
class DegenerateFitError : public Error {
 public:
  using Error::Error;
};

}  // namespace pcep
