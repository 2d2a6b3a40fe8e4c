#pragma once

#include <stdexcept>
#include <string>

namespace sislab {

// Error categories map 1:1 onto CLI exit codes:
// ConfigError -> 2, IoError -> 3, NumericalError -> 4.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Caller misuse of a library contract (stepping a finished episode,
// malformed fixtures, degenerate kinematics fed to pure functions).
struct UsageError : std::logic_error {
  explicit UsageError(const std::string& what) : std::logic_error(what) {}
};

} // namespace sislab
