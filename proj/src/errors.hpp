#pragma once

#include <stdexcept>
#include <string>

namespace szt {

// Error taxonomy shared by the library and the C API status codes.

struct CalibrationError : std::runtime_error {
  explicit CalibrationError(const std::string& m) : std::runtime_error(m) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& m) : std::runtime_error(m) {}
};

struct DivergedError : std::runtime_error {
  explicit DivergedError(const std::string& m) : std::runtime_error(m) {}
};

struct NoEscapeError : std::runtime_error {
  explicit NoEscapeError(const std::string& m) : std::runtime_error(m) {}
};

struct UnsupportedError : std::runtime_error {
  explicit UnsupportedError(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace szt
