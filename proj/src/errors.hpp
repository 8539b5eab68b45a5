#pragma once

#include <stdexcept>
#include <string>

namespace vanetflow {

// Raised when a model function is evaluated outside its domain
// (zero gap with a leader, vehicle past the obstacle, d <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Configuration validation failure. Carries the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::invalid_argument(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// Engine invariant violation (overlap, conservation). Never repaired.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vanetflow
