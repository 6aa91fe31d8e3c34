#pragma once

#include <stdexcept>
#include <string>

namespace dsf {

// Invalid or inconsistent run configuration. Maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or insufficient input data. Maps to exit status 3.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dsf
