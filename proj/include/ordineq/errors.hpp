#pragma once

#include <stdexcept>
#include <string>

namespace ordineq {

// Two error families, matching the CLI exit codes: validation problems in
// user-supplied files or configuration (exit 2) and numeric or dimensional
// problems in computations (exit 3).

class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// File-level validation failure; the message always carries the file path
/// and the 1-based line number of the offending row.
class ParseError : public ValidationError {
public:
  ParseError(const std::string& path, long line, const std::string& what)
      : ValidationError(path + ":" + std::to_string(line) + ": " + what),
        path_(path),
        line_(line) {}

  const std::string& path() const { return path_; }
  long line() const { return line_; }

private:
  std::string path_;
  long line_;
};

class ConfigError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class IoError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class DomainError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public DomainError {
public:
  using DomainError::DomainError;
};

}  // namespace ordineq
