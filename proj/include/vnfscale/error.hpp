#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vnfscale {

// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. `row` is 1-based (header = row 1) or 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row = 0)
      : Error(row ? "row " + std::to_string(row) + ": " + what : what), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

// Trace rows that are not evenly spaced in time.
class SpacingError : public Error {
 public:
  SpacingError(const std::string& what, std::size_t row) : Error(what), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

// A value outside its admissible domain (negative load, bad config field).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Not enough samples before/after a position for the requested window.
class WindowError : public Error {
 public:
  WindowError(const std::string& what, std::size_t required, std::size_t available)
      : Error(what + " (required " + std::to_string(required) + ", available " +
              std::to_string(available) + ")"),
        required_(required),
        available_(available) {}
  std::size_t required() const { return required_; }
  std::size_t available() const { return available_; }

 private:
  std::size_t required_;
  std::size_t available_;
};

class EmptyDatasetError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Model file problems.
class FormatVersionError : public Error {
 public:
  using Error::Error;
};

class CorruptionError : public Error {
 public:
  using Error::Error;
};

}  // namespace vnfscale
