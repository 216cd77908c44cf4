#pragma once

#include <stdexcept>
#include <string>

namespace noum {

/// Invalid or out-of-range configuration value.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Channel/precoder geometry that the construction cannot handle
/// (anti-parallel estimates, zero-norm channel).
class DegenerateGeometryError : public std::runtime_error {
 public:
  explicit DegenerateGeometryError(const std::string& what) : std::runtime_error(what) {}
};

/// Threshold calibration failed (missing entry, non-monotone curve).
class CalibrationError : public std::runtime_error {
 public:
  explicit CalibrationError(const std::string& what) : std::runtime_error(what) {}
};

/// File read/write failure.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace noum
