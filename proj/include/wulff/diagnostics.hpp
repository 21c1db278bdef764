#pragma once

#include <vector>

#include "wulff/levelset.hpp"
#include "wulff/mesh.hpp"
#include "wulff/problem.hpp"
#include "wulff/solver.hpp"

namespace wulff {

/// One row of the level diagnostics: the distribution functions, the
/// surface integrals of the level-set identities, the isoperimetric quotient,
/// the gradient spread along the level, and the fitted Wulff ball.
struct LevelRecord {
    double t = 0.0;
    double mu = 0.0;              // w({u > t})
    double source = 0.0;          // I(t) = int_{u>t} f(u) w
    double K = 0.0;               // I^alpha mu^beta
    double quotient = 0.0;        // Q(t) = P_{w,H}({u>t}) / mu^{(D-1)/D}
    double surf_w_over_grad = 0;  // int_{u=t} w / |grad u|
    double flux = 0.0;            // int_{u=t} H(grad u)^{p-1} H(nu) w
    double grad_mean = 0.0;       // length-weighted mean of H(grad u)
    double grad_cv = 0.0;         // std / mean of H(grad u) on the level
    Vec2 center;                  // ball fit constrained to the lineality subspace
    double rho = 0.0;
    Vec2 center_free;             // unconstrained ball fit
    double rho_free = 0.0;
    double fit_deviation = 0.0;   // relative RMS of the constrained fit
    bool usable = false;
};

struct LevelTable {
    std::vector<LevelRecord> levels;
    double M = 0.0;
    double alpha = 0.0; // p'
    double beta = 0.0;  // (p - D) / (D (p - 1))
};

/// Builds the level table on n_levels uniform levels in (0.05 M, 0.95 M).
/// Level components shorter than 4h are dropped from the surface integrals.
LevelTable distribution_table(const ProblemSpec& problem, const Mesh& mesh,
                              const Solution& solution, int n_levels = 32);

/// Max positive relative increment of K across consecutive levels
/// (0 when K is nonincreasing on the grid). Requires >= 10 usable levels.
double check_K_monotone(const LevelTable& table);

/// Min over interior levels of (-mu' - S) / S, with -mu' by centered
/// differences and S the surface integral of w/|grad u|. The continuous
/// inequality makes this nonnegative up to discretization.
double mu_derivative_check(const LevelTable& table);

/// Min over levels of [I^{1/p} S^{(p-1)/p} - c mu^{(D-1)/D}] / (c mu^{(D-1)/D}).
double holder_isoperimetric_check(const LevelTable& table, const ProblemSpec& problem, double c);

/// Max over levels of |I - flux| / I.
double gauss_green_worst(const LevelTable& table);

/// Max over levels of |Q(t) - c| / c.
double quotient_worst(const LevelTable& table, double c);

double grad_cv_max(const LevelTable& table);

/// Coefficient of variation of H(grad u) along {u = t}.
double gradient_constancy(const ProblemSpec& problem, const Mesh& mesh, const Solution& solution,
                          double t);

struct PohozaevTerms {
    double bulk = 0.0;     // D int F(u) w + ((p-D)/p) int u f(u) w
    double boundary = 0.0; // (1/p') int_{Gamma0} H(grad u)^p <x,nu> w
};

/// Both sides of the Pohozaev identity, with one-sided gradients on Gamma0.
PohozaevTerms pohozaev_terms(const ProblemSpec& problem, const Mesh& mesh,
                             const Solution& solution);

/// |bulk - boundary| normalized by the boundary term.
double pohozaev_residual(const ProblemSpec& problem, const Mesh& mesh, const Solution& solution);

struct RadialFit {
    Vec2 center;                    // global center in the admissible subspace
    std::vector<double> knots;      // radial profile g: piecewise linear
    std::vector<double> values;
    double max_deviation = 0.0;     // sup |u(x) - g(H0(x - center))|
    double center_drift = 0.0;      // max H0(x(t) - center) over levels
    double center_vertex_distance = 0.0; // max H0(x_free(t)) (vertex cones)
    double nesting_max_slack = 0.0; // max of H0(x(t)-x(s)) - (rho(t)-rho(s))
    double profile_value(double r) const;
};

/// Global Wulff-radial fit: averages the per-level centers over the
/// admissible subspace, fits a least-squares piecewise-linear radial
/// profile, and checks the nested-ball inequality between all level pairs.
/// Throws GeometryError with fewer than 5 usable levels.
RadialFit radial_fit(const ProblemSpec& problem, const Mesh& mesh, const Solution& solution,
                     const LevelTable& table);

/// Share of the weighted domain volume held by triangles with
/// H(grad u) below `threshold` where the frozen source is positive;
/// reported (not asserted) since the discrete critical set is ambiguous.
double small_gradient_mass(const ProblemSpec& problem, const Mesh& mesh,
                           const Solution& solution, double threshold);

} // namespace wulff
