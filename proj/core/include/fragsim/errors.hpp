#pragma once

#include <stdexcept>
#include <string>

namespace fragsim {

/// A configuration document was rejected. key() names the offending key, or
/// is empty for document-level problems.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message),
        key_{std::move(key)} {}

  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

}  // namespace fragsim
