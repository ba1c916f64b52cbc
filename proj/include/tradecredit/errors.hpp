#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tradecredit {

/// An input violates a documented range or shape constraint.
/// `path()` addresses the offending field ("scenarios.base.mix[1].share"),
/// empty when the caller passed bare values.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string path, const std::string& message);

  const std::string& path() const noexcept { return path_; }
  /// The message without the path prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  std::string path_;
  std::string message_;
};

/// Text could not be parsed. `position()` is a 0-based character offset.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, const std::string& message);

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Inputs are well-formed but the quantity is mathematically undefined
/// (zero-variance correlation, profit rate over zero cost growth).
class UndefinedError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tradecredit
