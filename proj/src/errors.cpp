#include "tradecredit/errors.hpp"

namespace tradecredit {

namespace {

std::string with_path(const std::string& path, const std::string& message) {
  return path.empty() ? message : path + ": " + message;
}

}  // namespace

ValidationError::ValidationError(std::string path, const std::string& message)
    : std::invalid_argument(with_path(path, message)), path_(std::move(path)), message_(message) {}

ParseError::ParseError(std::size_t position, const std::string& message)
    : std::runtime_error(message + " (at position " + std::to_string(position) + ")"),
      position_(position) {}

}  // namespace tradecredit
