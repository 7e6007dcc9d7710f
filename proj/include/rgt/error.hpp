#pragma once

#include <stdexcept>
#include <string>

namespace rgt {

// Caller violated a documented precondition (bad argument, bad config).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Config validation failure; `field()` is a JSON-pointer-like path such as
// "policies[2].epsilon".
class ConfigError : public UsageError {
 public:
  ConfigError(std::string field, std::string message)
      : UsageError(field + ": " + message),
        field_(std::move(field)),
        message_(std::move(message)) {}

  const std::string& field() const noexcept { return field_; }
  const std::string& message() const noexcept { return message_; }

  // Same error, nested under `parent` ("policies[1]" + "epsilon").
  ConfigError prefixed(const std::string& parent) const {
    return ConfigError(parent + "." + field_, message_);
  }

 private:
  std::string field_;
  std::string message_;
};

// A numeric routine failed to converge or produced a non-finite value.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reading or writing a file failed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rgt
