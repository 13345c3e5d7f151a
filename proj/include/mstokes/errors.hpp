#pragma once

#include <stdexcept>
#include <string>

namespace mstokes {

// Invalid domain or colloid layout (overlaps, colloid outside the outer boundary).
struct GeometryError : std::runtime_error {
  explicit GeometryError(const std::string& msg) : std::runtime_error(msg) {}
};

// Discretization too coarse for the requested configuration.
struct ResolutionError : std::runtime_error {
  explicit ResolutionError(const std::string& msg) : std::runtime_error(msg) {}
};

// Too few points to determine a polynomial of the requested order.
struct UnisolvencyError : std::runtime_error {
  explicit UnisolvencyError(const std::string& msg) : std::runtime_error(msg) {}
};

// A stencil could not be built (degenerate neighborhood, misuse of a boundary-only operator).
struct StencilError : std::runtime_error {
  explicit StencilError(const std::string& msg) : std::runtime_error(msg) {}
};

// Preconditioner or hierarchy construction failed.
struct SetupError : std::runtime_error {
  explicit SetupError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad or missing configuration input.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// I/O failure writing results.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace mstokes
