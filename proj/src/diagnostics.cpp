#include "wulff/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "wulff/errors.hpp"
#include "wulff/isoperimetry.hpp"
#include "wulff/parallel.hpp"
#include "wulff/quadrature.hpp"

namespace wulff {

namespace {

double polyline_length(const LevelPolyline& pl) {
    double len = 0.0;
    const std::size_t n = pl.points.size();
    for (std::size_t s = 0; s < pl.tris.size(); ++s)
        len += norm(pl.points[(s + 1) % n] - pl.points[s]);
    return len;
}

struct SurfaceSums {
    double w_over_grad = 0.0;
    double flux = 0.0;
    double perimeter = 0.0;
    double grad_mean = 0.0;
    double grad_cv = 0.0;
    std::vector<Vec2> free_points; // level points away from the cone boundary
};

SurfaceSums surface_sums(const ProblemSpec& problem, const Mesh& mesh,
                         const std::vector<Vec2>& grads,
                         const std::vector<LevelPolyline>& polys) {
    SurfaceSums out;
    double len_total = 0.0, m1 = 0.0, m2 = 0.0;
    for (const LevelPolyline& pl : polys) {
        if (polyline_length(pl) < 4.0 * mesh.h) continue; // sub-resolution component
        const std::size_t n = pl.points.size();
        for (std::size_t s = 0; s < pl.tris.size(); ++s) {
            const Vec2 a = pl.points[s], b = pl.points[(s + 1) % n];
            const double len = norm(b - a);
            if (len == 0.0) continue;
            const Vec2 g = grads[static_cast<std::size_t>(pl.tris[s])];
            const double gnorm = norm(g);
            if (gnorm == 0.0) continue;
            const Vec2 nu = -1.0 * g / gnorm; // outer normal of {u > t}
            const double hg = eval_norm(problem.H, g);
            const double wmid = weight_eval(problem.w, 0.5 * (a + b));
            out.w_over_grad += wmid / gnorm * len;
            out.flux += std::pow(hg, problem.p - 1.0) * eval_norm(problem.H, nu) * wmid * len;
            out.perimeter += eval_norm(problem.H, nu) * wmid * len;
            len_total += len;
            m1 += hg * len;
            m2 += hg * hg * len;
        }
        for (const Vec2& p : pl.points) {
            if (problem.cone.kind == ConeKind::FullPlane ||
                cone_boundary_distance(problem.cone, p) > 1e-7 * mesh.R)
                out.free_points.push_back(p);
        }
    }
    if (len_total > 0.0) {
        out.grad_mean = m1 / len_total;
        const double var = std::max(0.0, m2 / len_total - out.grad_mean * out.grad_mean);
        out.grad_cv = out.grad_mean > 0.0 ? std::sqrt(var) / out.grad_mean : 0.0;
    }
    return out;
}

} // namespace

LevelTable distribution_table(const ProblemSpec& problem, const Mesh& mesh,
                              const Solution& solution, int n_levels) {
    if (n_levels < 2) throw GeometryError("distribution_table: need at least 2 levels");
    LevelTable table;
    table.M = solution.max_value;
    if (!(table.M > 0.0)) throw GeometryError("distribution_table: degenerate solution (M = 0)");
    const double D = problem.effective_dimension();
    table.alpha = problem.p / (problem.p - 1.0);
    table.beta = (problem.p - D) / (D * (problem.p - 1.0));
    table.levels.resize(static_cast<std::size_t>(n_levels));

    const LinealityDecomposition lin = lineality_decomposition(problem.cone);
    const std::vector<Vec2>& grads = solution.gradients;

    parallel_for(static_cast<std::size_t>(n_levels), [&](std::size_t i) {
        LevelRecord& rec = table.levels[i];
        rec.t = 0.05 * table.M + 0.9 * table.M * static_cast<double>(i) / (n_levels - 1);
        const SuperlevelIntegrals vol = superlevel_integrals(problem, mesh, solution.u, rec.t);
        rec.mu = vol.mu;
        rec.source = vol.I;
        rec.K = std::pow(rec.source, table.alpha) * std::pow(rec.mu, table.beta);

        std::vector<LevelPolyline> polys;
        try {
            polys = extract_level_set(mesh, solution.u, rec.t);
        } catch (const GeometryError&) {
            return; // level above the discrete max: left unusable
        }
        const SurfaceSums s = surface_sums(problem, mesh, grads, polys);
        rec.surf_w_over_grad = s.w_over_grad;
        rec.flux = s.flux;
        rec.grad_mean = s.grad_mean;
        rec.grad_cv = s.grad_cv;
        rec.quotient = rec.mu > 0.0 ? s.perimeter / std::pow(rec.mu, (D - 1.0) / D) : 0.0;

        if (s.free_points.size() < 8) return;
        try {
            MinimizerFit constrained;
            if (lin.k == 0) {
                constrained = MinimizerFit{};
                double rho = 0.0;
                for (const Vec2& p : s.free_points) rho += dual_norm(problem.H, p);
                constrained.ball.center = {0.0, 0.0};
                constrained.ball.radius = rho / static_cast<double>(s.free_points.size());
                double sq = 0.0;
                for (const Vec2& p : s.free_points) {
                    const double d = dual_norm(problem.H, p) - constrained.ball.radius;
                    sq += d * d;
                }
                constrained.deviation =
                    std::sqrt(sq / static_cast<double>(s.free_points.size())) /
                    constrained.ball.radius;
            } else if (lin.k == 1) {
                constrained = fit_wulff_ball_on_line(problem.H, s.free_points, lin.line_direction);
            } else {
                constrained = fit_wulff_ball_free(problem.H, s.free_points);
            }
            const MinimizerFit free = lin.k == 2
                                          ? constrained
                                          : fit_wulff_ball_free(problem.H, s.free_points);
            rec.center = constrained.ball.center;
            rec.rho = constrained.ball.radius;
            rec.fit_deviation = constrained.deviation;
            rec.center_free = free.ball.center;
            rec.rho_free = free.ball.radius;
            rec.usable = rec.mu > 0.0 && rec.source > 0.0 && rec.surf_w_over_grad > 0.0;
        } catch (const GeometryError&) {
            rec.usable = false;
        }
    });
    return table;
}

double check_K_monotone(const LevelTable& table) {
    int usable = 0;
    for (const auto& r : table.levels) usable += r.usable;
    if (usable < 10) throw GeometryError("check_K_monotone: need at least 10 usable levels");
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < table.levels.size(); ++i) {
        const LevelRecord& a = table.levels[i];
        const LevelRecord& b = table.levels[i + 1];
        if (!a.usable || !b.usable || a.K <= 0.0) continue;
        worst = std::max(worst, (b.K - a.K) / a.K);
    }
    return worst;
}

double mu_derivative_check(const LevelTable& table) {
    double worst = 0.0;
    bool first = true;
    for (std::size_t i = 1; i + 1 < table.levels.size(); ++i) {
        const LevelRecord& lo = table.levels[i - 1];
        const LevelRecord& mid = table.levels[i];
        const LevelRecord& hi = table.levels[i + 1];
        if (!lo.usable || !mid.usable || !hi.usable) continue;
        if (!(mid.surf_w_over_grad > 0.0)) continue;
        const double neg_mu_prime = (lo.mu - hi.mu) / (hi.t - lo.t);
        const double slack = (neg_mu_prime - mid.surf_w_over_grad) / mid.surf_w_over_grad;
        if (first || slack < worst) {
            worst = slack;
            first = false;
        }
    }
    if (first) throw GeometryError("mu_derivative_check: no usable interior levels");
    return worst;
}

double holder_isoperimetric_check(const LevelTable& table, const ProblemSpec& problem, double c) {
    const double D = problem.effective_dimension();
    const double p = problem.p;
    double worst = 0.0;
    bool first = true;
    for (const LevelRecord& r : table.levels) {
        if (!r.usable) continue;
        const double lhs = std::pow(r.source, 1.0 / p) *
                           std::pow(r.surf_w_over_grad, (p - 1.0) / p);
        const double rhs = c * std::pow(r.mu, (D - 1.0) / D);
        const double slack = (lhs - rhs) / rhs;
        if (first || slack < worst) {
            worst = slack;
            first = false;
        }
    }
    if (first) throw GeometryError("holder_isoperimetric_check: no usable levels");
    return worst;
}

double gauss_green_worst(const LevelTable& table) {
    double worst = 0.0;
    for (const LevelRecord& r : table.levels) {
        if (!r.usable || !(r.source > 0.0)) continue;
        worst = std::max(worst, std::abs(r.source - r.flux) / r.source);
    }
    return worst;
}

double quotient_worst(const LevelTable& table, double c) {
    double worst = 0.0;
    for (const LevelRecord& r : table.levels)
        if (r.usable) worst = std::max(worst, std::abs(r.quotient - c) / c);
    return worst;
}

double grad_cv_max(const LevelTable& table) {
    double worst = 0.0;
    for (const LevelRecord& r : table.levels)
        if (r.usable) worst = std::max(worst, r.grad_cv);
    return worst;
}

double gradient_constancy(const ProblemSpec& problem, const Mesh& mesh, const Solution& solution,
                          double t) {
    const std::vector<LevelPolyline> polys = extract_level_set(mesh, solution.u, t);
    const SurfaceSums s = surface_sums(problem, mesh, solution.gradients, polys);
    return s.grad_cv;
}

PohozaevTerms pohozaev_terms(const ProblemSpec& problem, const Mesh& mesh,
                             const Solution& solution) {
    const double D = problem.effective_dimension();
    const double p = problem.p;
    const double pprime = p / (p - 1.0);

    double bulk = 0.0;
    for (std::size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
        const auto& tri = mesh.triangles[ti];
        const Vec2 v[3] = {mesh.vertices[static_cast<std::size_t>(tri[0])],
                           mesh.vertices[static_cast<std::size_t>(tri[1])],
                           mesh.vertices[static_cast<std::size_t>(tri[2])]};
        const double uv[3] = {solution.u[static_cast<std::size_t>(tri[0])],
                              solution.u[static_cast<std::size_t>(tri[1])],
                              solution.u[static_cast<std::size_t>(tri[2])]};
        const Vec2 g = solution.gradients[ti];
        auto f_bulk = [&](Vec2 x) {
            const double ux = uv[0] + dot(g, x - v[0]);
            return (D * source_primitive(problem.f, ux) +
                    (p - D) / p * ux * source_eval(problem.f, ux)) *
                   weight_eval(problem.w, x);
        };
        bulk += integrate_triangle(v[0], v[1], v[2], f_bulk, 1);
    }

    double boundary = 0.0;
    for (const BoundaryEdge& e : mesh.boundary_edges) {
        if (e.tag != BoundaryTag::Gamma0) continue;
        const Vec2 a = mesh.vertices[static_cast<std::size_t>(e.a)];
        const Vec2 b = mesh.vertices[static_cast<std::size_t>(e.b)];
        const double len = norm(b - a);
        if (len == 0.0) continue;
        const Vec2 nu = -1.0 * perp_left((b - a) / len); // domain on the left
        const Vec2 mid = 0.5 * (a + b);
        const Vec2 g = solution.gradients[static_cast<std::size_t>(e.tri)];
        const double hg = eval_norm(problem.H, g);
        boundary += std::pow(hg, p) * dot(mid, nu) * weight_eval(problem.w, mid) * len;
    }
    boundary /= pprime;
    return PohozaevTerms{bulk, boundary};
}

double pohozaev_residual(const ProblemSpec& problem, const Mesh& mesh, const Solution& solution) {
    const PohozaevTerms t = pohozaev_terms(problem, mesh, solution);
    return std::abs(t.bulk - t.boundary) / std::abs(t.boundary);
}

double RadialFit::profile_value(double r) const {
    if (knots.empty()) return 0.0;
    if (r <= knots.front()) return values.front();
    if (r >= knots.back()) return values.back();
    const auto it = std::upper_bound(knots.begin(), knots.end(), r);
    const std::size_t i = static_cast<std::size_t>(it - knots.begin());
    const double s = (r - knots[i - 1]) / (knots[i] - knots[i - 1]);
    return values[i - 1] + s * (values[i] - values[i - 1]);
}

RadialFit radial_fit(const ProblemSpec& problem, const Mesh& mesh, const Solution& solution,
                     const LevelTable& table) {
    std::vector<const LevelRecord*> usable;
    for (const auto& r : table.levels)
        if (r.usable) usable.push_back(&r);
    if (usable.size() < 5) throw GeometryError("radial_fit: fewer than 5 usable levels");

    RadialFit fit;
    const LinealityDecomposition lin = lineality_decomposition(problem.cone);
    Vec2 center{0.0, 0.0};
    if (lin.k > 0) {
        for (const LevelRecord* r : usable) center = center + r->center;
        center = center / static_cast<double>(usable.size());
        if (lin.k == 1) center = dot(center, lin.line_direction) * lin.line_direction;
    }
    fit.center = center;

    for (const LevelRecord* r : usable) {
        fit.center_drift = std::max(fit.center_drift, dual_norm(problem.H, r->center - center));
        fit.center_vertex_distance =
            std::max(fit.center_vertex_distance, dual_norm(problem.H, r->center_free));
    }

    // Nested-ball inequality between every pair of levels (t asc => rho desc).
    for (std::size_t i = 0; i < usable.size(); ++i) {
        for (std::size_t j = i + 1; j < usable.size(); ++j) {
            const double slack = dual_norm(problem.H, usable[i]->center - usable[j]->center) -
                                 (usable[i]->rho - usable[j]->rho);
            fit.nesting_max_slack = std::max(fit.nesting_max_slack, slack);
        }
    }

    // Least-squares piecewise-linear radial profile on knots ~2h apart.
    std::vector<double> rho(mesh.vertices.size());
    double rmax = 0.0;
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
        rho[v] = dual_norm(problem.H, mesh.vertices[v] - center);
        rmax = std::max(rmax, rho[v]);
    }
    const int nk = std::max(4, static_cast<int>(std::lround(rmax / (2.0 * mesh.h))));
    fit.knots.resize(static_cast<std::size_t>(nk) + 1);
    for (int k = 0; k <= nk; ++k) fit.knots[static_cast<std::size_t>(k)] = rmax * k / nk;
    const double dr = rmax / nk;

    std::vector<double> diag(fit.knots.size(), 1e-12), off(fit.knots.size(), 0.0),
        rhs(fit.knots.size(), 0.0);
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
        const double pos = std::min(rho[v] / dr, static_cast<double>(nk) - 1e-12);
        const std::size_t k = static_cast<std::size_t>(pos);
        const double s = pos - static_cast<double>(k);
        const double w0 = 1.0 - s, w1 = s;
        diag[k] += w0 * w0;
        diag[k + 1] += w1 * w1;
        off[k] += w0 * w1;
        rhs[k] += w0 * solution.u[v];
        rhs[k + 1] += w1 * solution.u[v];
    }
    // Thomas algorithm on the tridiagonal normal equations.
    const std::size_t m = fit.knots.size();
    std::vector<double> cp(m, 0.0), dp(m, 0.0);
    cp[0] = off[0] / diag[0];
    dp[0] = rhs[0] / diag[0];
    for (std::size_t k = 1; k < m; ++k) {
        const double denom = diag[k] - off[k - 1] * cp[k - 1];
        cp[k] = k + 1 < m ? off[k] / denom : 0.0;
        dp[k] = (rhs[k] - off[k - 1] * dp[k - 1]) / denom;
    }
    fit.values.assign(m, 0.0);
    fit.values[m - 1] = dp[m - 1];
    for (std::size_t k = m - 1; k-- > 0;) fit.values[k] = dp[k] - cp[k] * fit.values[k + 1];

    for (std::size_t v = 0; v < mesh.vertices.size(); ++v)
        fit.max_deviation =
            std::max(fit.max_deviation, std::abs(solution.u[v] - fit.profile_value(rho[v])));
    return fit;
}

double small_gradient_mass(const ProblemSpec& problem, const Mesh& mesh,
                           const Solution& solution, double threshold) {
    double flagged = 0.0, total = 0.0;
    for (std::size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
        const auto& tri = mesh.triangles[ti];
        const Vec2 a = mesh.vertices[static_cast<std::size_t>(tri[0])];
        const Vec2 b = mesh.vertices[static_cast<std::size_t>(tri[1])];
        const Vec2 c = mesh.vertices[static_cast<std::size_t>(tri[2])];
        const double wint =
            integrate_triangle(a, b, c, [&](Vec2 x) { return weight_eval(problem.w, x); });
        total += wint;
        const double uc = (solution.u[static_cast<std::size_t>(tri[0])] +
                           solution.u[static_cast<std::size_t>(tri[1])] +
                           solution.u[static_cast<std::size_t>(tri[2])]) / 3.0;
        if (eval_norm(problem.H, solution.gradients[ti]) < threshold &&
            source_eval(problem.f, uc) > 0.0)
            flagged += wint;
    }
    return total > 0.0 ? flagged / total : 0.0;
}

} // namespace wulff
