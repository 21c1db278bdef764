#pragma once

#include <stdexcept>
#include <string>

namespace wulff {

// Invalid run configuration or spec construction. CLI exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Geometric contract violation (non-simple polygon, degenerate argument,
// failed bracket, mesh quality failure). CLI exit code 3 when it indicates
// an isoperimetric violation, otherwise surfaced as a test failure.
struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Solver failed to converge within the configured budget. CLI exit code 4.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace wulff
