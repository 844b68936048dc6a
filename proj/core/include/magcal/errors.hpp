#pragma once

#include <stdexcept>
#include <string>

namespace magcal {

/// Base class for all magcal errors. `kind()` is a stable machine-readable
/// tag used by the CLI when emitting error JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

/// Numerical failures (CLI exit code 1).
class NumericalError : public Error {
 public:
  using Error::Error;
  explicit NumericalError(const std::string& what)
      : Error("NumericalError", what) {}
};

class GimbalLockError : public NumericalError {
 public:
  explicit GimbalLockError(const std::string& what)
      : NumericalError("GimbalLock", what) {}
};

class SingularCovarianceError : public NumericalError {
 public:
  explicit SingularCovarianceError(const std::string& what)
      : NumericalError("SingularCovariance", what) {}
};

class NormalEquationsSingularError : public NumericalError {
 public:
  explicit NormalEquationsSingularError(const std::string& what)
      : NumericalError("NormalEquationsSingular", what) {}
};

class IllConditionedError : public NumericalError {
 public:
  explicit IllConditionedError(const std::string& what)
      : NumericalError("IllConditioned", what) {}
};

class RankDeficientError : public NumericalError {
 public:
  explicit RankDeficientError(const std::string& what)
      : NumericalError("RankDeficient", what) {}
};

/// Input validation failures (CLI exit code 2).
class ValidationError : public Error {
 public:
  using Error::Error;
  explicit ValidationError(const std::string& what)
      : Error("ValidationError", what) {}
};

class DimensionMismatchError : public ValidationError {
 public:
  explicit DimensionMismatchError(const std::string& what)
      : ValidationError("DimensionMismatch", what) {}
};

class SchemaError : public ValidationError {
 public:
  explicit SchemaError(const std::string& what)
      : ValidationError("SchemaError", what) {}
};

class MonotonicityError : public ValidationError {
 public:
  MonotonicityError(std::size_t line, const std::string& what)
      : ValidationError("MonotonicityError", what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_ = 0;
};

/// File system and parsing failures (CLI exit code 2).
class IoError : public Error {
 public:
  using Error::Error;
  explicit IoError(const std::string& what) : Error("IoError", what) {}
};

class FileNotFoundError : public IoError {
 public:
  explicit FileNotFoundError(const std::string& path)
      : IoError("FileNotFound", "file not found: " + path) {}
};

class ParseError : public IoError {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& reason)
      : IoError("ParseError", "line " + std::to_string(line) + ", column " +
                                  std::to_string(column) + ": " + reason),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_ = 0;
  std::size_t column_ = 0;
};

}  // namespace magcal
