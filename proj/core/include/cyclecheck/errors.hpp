#pragma once

#include <stdexcept>
#include <string>

namespace cyclecheck {

/// Bad or inconsistent configuration (exit code 1 at the CLI).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unreadable input data (exit code 2).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Output directory problems: unwritable, or existing files without
/// --overwrite (exit code 3).
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two analyses do not share the same grid (exit code 4).
class GridMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cyclecheck
