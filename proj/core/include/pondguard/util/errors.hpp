#pragma once

#include <stdexcept>
#include <string>

namespace pondguard {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid scenario, environment or command-line input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace pondguard
