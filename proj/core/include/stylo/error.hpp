#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace stylo {

// Root of every error raised by the library. The CLI maps any Error to
// exit code 2 (data/validation failure).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller supplied data that violates an operation's precondition.
class InputError : public Error {
 public:
  using Error::Error;
};

// Index range outside the valid domain of a series.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration value (agreement threshold, grid, hyperparameters).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Operation invoked on an object in the wrong state (e.g. unfitted model).
class StateError : public Error {
 public:
  using Error::Error;
};

// A keyed record (embedding id, CSV column) was not found.
class LookupError : public Error {
 public:
  using Error::Error;
};

// A record or file violates a schema invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Syntactically malformed input. Carries the 1-based line number when the
// failure is tied to a line of a text file (0 otherwise).
class ParseError : public Error {
 public:
  ParseError(std::string detail, std::size_t line, std::string file = {})
      : Error(format(detail, line, file)), detail_(std::move(detail)), line_(line) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  static std::string format(const std::string& detail, std::size_t line, const std::string& file) {
    std::string out = file.empty() ? "" : file + ": ";
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    return out + detail;
  }

  std::string detail_;
  std::size_t line_;
};

}  // namespace stylo
