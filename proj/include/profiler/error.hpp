#pragma once

#include <stdexcept>
#include <string>

namespace profiler {

// Exception taxonomy; the CLI maps each kind to its exit code.

// Invalid configuration or arguments (exit 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed, missing, or inconsistent input data (exit 3).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A broken internal invariant (exit 4).
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace profiler
