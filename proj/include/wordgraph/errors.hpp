#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wordgraph {

/// Base class of all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input data (vectors file, edge TSV, partition TSV, ...).
/// Carries a 1-based line number when the failure is tied to one line.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message, std::size_t line = 0)
      : Error(line ? message + " (line " + std::to_string(line) + ")" : message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Invalid configuration: bad value ranges, unknown keys, bad flags.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failures: missing files, unwritable outputs.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Violated mathematical precondition (edgeless graph, invalid node id,
/// similarity outside its domain, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace wordgraph
