#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wulff/problem.hpp"
#include "wulff/solver.hpp"

namespace wulff {

/// Tolerances for the verify pipeline. Values mirror the discrete accuracy
/// the diagnostics are specified at; they are pinned here, not calibrated.
struct DiagnosticsConfig {
    int n_levels = 32;
    double gauss_green_tol = 0.02;
    double holder_tol = 0.02;
    double quotient_tol = 0.02;
    double grad_cv_tol = 0.03;
    double k_increment_tol = 0.02;
    double mu_slack_tol = 0.02;
    double pohozaev_tol = 0.03;
    double center_drift_factor = 2.0;     // x h
    double nesting_factor = 2.0;          // x h
    double profile_deviation_factor = 0.01; // x M
    // Geometry-suite knobs (cmd_geom).
    int isop_sets = 50;
    int isop_arc_points = 4096;
    int isop_boundary_points = 512;
};

struct OutputConfig {
    std::string directory = "out";
    bool csv = true;
    bool json = true;
    bool svg = true;
};

struct MeshConfig {
    double h = 0.05;
    bool grading = true;
};

struct RunConfig {
    ProblemSpec problem;
    MeshConfig mesh;
    SolverConfig solver;
    DiagnosticsConfig diagnostics;
    OutputConfig output;
    std::uint64_t seed = 42;
};

/// Parses and validates the flat JSON config. Unknown keys anywhere are
/// rejected; every referenced spec is constructed (and therefore validated)
/// at load time. Throws ConfigError on any problem.
RunConfig load_config(const std::string& path);
RunConfig parse_config_json(const std::string& text);

} // namespace wulff
