#pragma once

#include <vector>

#include "wulff/mesh.hpp"
#include "wulff/problem.hpp"

namespace wulff {

struct SolverConfig {
    double tol = 1e-8;      // scaled gradient-norm tolerance
    int max_iter = 200000;  // total inner iteration budget
    std::vector<double> eps_schedule = {1e-1, 1e-2, 1e-3, 1e-4};
    int lbfgs_memory = 8;
    int max_outer = 30;     // Picard refresh limit per continuation stage
};

struct Solution {
    std::vector<double> u;            // vertex values, zero on Gamma0
    std::vector<Vec2> gradients;      // per-triangle gradients of u
    double max_value = 0.0;           // M = max u
    double final_eps = 0.0;
    int iterations = 0;
    double energy_value = 0.0;
    double gradient_norm = 0.0;
    // Largest |grad u| within R/8 of the cone vertex; the continuous
    // W^{1,infty} gluing hypothesis cannot be certified, only reported.
    double vertex_zone_max_gradient = 0.0;
    std::vector<double> energy_history;
    bool converged = false;
};

/// Discrete energy: sum over triangles of
///   [ psi_eps(H(grad u)) - mean_F(u) ] * int_T w,
/// with psi_eps(t) = ((eps^2 + t^2)^{p/2} - eps^p) / p and mean_F the
/// edge-midpoint average of the primitive F(u). u must vanish on Gamma0.
double energy(const ProblemSpec& problem, const Mesh& mesh, const std::vector<double>& u,
              double eps);

/// Exact gradient of the discrete energy with f evaluated at the current u
/// (Picard linearization of the source term). Entries on Gamma0 are zero.
std::vector<double> energy_gradient(const ProblemSpec& problem, const Mesh& mesh,
                                    const std::vector<double>& u, double eps);

/// Minimizes the regularized energy with eps-continuation, a Picard outer
/// loop for the source, and an L-BFGS inner loop with backtracking line
/// search. Dirichlet values on Gamma0 are imposed strongly.
/// Throws SolverError on non-convergence within config.max_iter.
Solution solve(const ProblemSpec& problem, const Mesh& mesh, const SolverConfig& config = {});

/// Max over free-vertex hat functions of the weak-form residual
///   | int H(grad u)^{p-1} <grad_xi H, grad phi> w - int f(u) phi w |,
/// normalized by the largest source term.
double weak_residual(const ProblemSpec& problem, const Mesh& mesh, const Solution& solution);

} // namespace wulff
