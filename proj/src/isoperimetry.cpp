#include "wulff/isoperimetry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "wulff/errors.hpp"
#include "wulff/rng.hpp"

namespace wulff {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Nelder-Mead on a small number of parameters. Deterministic; good enough
// for the smooth low-dimensional ball-fit objectives used here.
std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> start, double scale, int max_iter) {
    const std::size_t n = start.size();
    std::vector<std::vector<double>> simplex(n + 1, start);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += scale;
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fv[i] = f(simplex[i]);

    for (int it = 0; it < max_iter; ++it) {
        // Order the simplex.
        std::vector<std::size_t> idx(n + 1);
        for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&fv](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        if (std::abs(fv[idx[n]] - fv[idx[0]]) <= 1e-14 * (1.0 + std::abs(fv[idx[0]]))) break;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t d = 0; d < n; ++d) centroid[d] += simplex[idx[i]][d] / static_cast<double>(n);

        auto affine = [&](double t) {
            std::vector<double> p(n);
            for (std::size_t d = 0; d < n; ++d)
                p[d] = centroid[d] + t * (simplex[idx[n]][d] - centroid[d]);
            return p;
        };

        const std::vector<double> refl = affine(-1.0);
        const double f_refl = f(refl);
        if (f_refl < fv[idx[0]]) {
            const std::vector<double> expa = affine(-2.0);
            const double f_expa = f(expa);
            if (f_expa < f_refl) {
                simplex[idx[n]] = expa;
                fv[idx[n]] = f_expa;
            } else {
                simplex[idx[n]] = refl;
                fv[idx[n]] = f_refl;
            }
            continue;
        }
        if (f_refl < fv[idx[n - 1]]) {
            simplex[idx[n]] = refl;
            fv[idx[n]] = f_refl;
            continue;
        }
        const std::vector<double> contr = affine(0.5);
        const double f_contr = f(contr);
        if (f_contr < fv[idx[n]]) {
            simplex[idx[n]] = contr;
            fv[idx[n]] = f_contr;
            continue;
        }
        // Shrink toward the best vertex.
        for (std::size_t i = 1; i <= n; ++i) {
            for (std::size_t d = 0; d < n; ++d)
                simplex[idx[i]][d] = 0.5 * (simplex[idx[i]][d] + simplex[idx[0]][d]);
            fv[idx[i]] = f(simplex[idx[i]]);
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i <= n; ++i)
        if (fv[i] < fv[best]) best = i;
    return simplex[best];
}

// Mean squared residual of |H0(v - c) - rho| with the radius profiled out.
double ball_fit_objective(const NormSpec& H, const std::vector<Vec2>& pts, Vec2 center,
                          double* out_radius) {
    double rho = 0.0;
    for (const Vec2& v : pts) rho += dual_norm(H, v - center);
    rho /= static_cast<double>(pts.size());
    double sq = 0.0;
    for (const Vec2& v : pts) {
        const double d = dual_norm(H, v - center) - rho;
        sq += d * d;
    }
    if (out_radius) *out_radius = rho;
    return sq / static_cast<double>(pts.size());
}

MinimizerFit finish_fit(const NormSpec& H, const std::vector<Vec2>& pts, Vec2 center) {
    MinimizerFit fit;
    double rho = 0.0;
    const double msq = ball_fit_objective(H, pts, center, &rho);
    fit.ball.center = center;
    fit.ball.radius = rho;
    fit.deviation = std::sqrt(msq) / rho;
    fit.free_vertices = static_cast<int>(pts.size());
    return fit;
}

double points_scale(const std::vector<Vec2>& pts) {
    double s = 0.0;
    for (const Vec2& v : pts) s = std::max(s, norm(v));
    return s > 0.0 ? s : 1.0;
}

// Three fit parameters do not need thousands of samples; a strided subset
// keeps the generic dual-norm evaluation affordable.
std::vector<Vec2> subsample_points(const std::vector<Vec2>& pts, std::size_t cap = 128) {
    if (pts.size() <= cap) return pts;
    std::vector<Vec2> out;
    out.reserve(cap);
    for (std::size_t i = 0; i < cap; ++i) out.push_back(pts[i * pts.size() / cap]);
    return out;
}

} // namespace

double isoperimetric_quotient(const NormSpec& H, const WeightSpec& w, const ConeSpec& cone,
                              const PolygonalSet& E) {
    const double vol = weighted_volume(w, E, cone);
    if (!(vol > 0.0)) throw GeometryError("isoperimetric_quotient: zero-volume set");
    const double per = weighted_perimeter(H, w, E, cone);
    const double D = 2.0 + w.lambda;
    return per / std::pow(vol, (D - 1.0) / D);
}

double optimal_constant(const NormSpec& H, const WeightSpec& w, const ConeSpec& cone, int n_arc) {
    const PolygonalSet B = wulff_sector_polygon(H, cone, 1.0, n_arc);
    return isoperimetric_quotient(H, w, cone, B);
}

double optimal_constant_from_volume(const NormSpec& H, const WeightSpec& w, const ConeSpec& cone,
                                    int n_arc) {
    const PolygonalSet B = wulff_sector_polygon(H, cone, 1.0, n_arc);
    const double D = 2.0 + w.lambda;
    return D * std::pow(weighted_volume(w, B, cone), 1.0 / D);
}

IsopReport verify_inequality(const NormSpec& H, const WeightSpec& w, const ConeSpec& cone,
                             const PolygonalSet& E) {
    IsopReport r;
    r.quotient = isoperimetric_quotient(H, w, cone, E);
    r.constant = optimal_constant(H, w, cone);
    r.margin = r.quotient - r.constant;
    try {
        const MinimizerFit fit = characterize_minimizer(H, w, cone, E);
        r.fitted_ball = fit.ball;
        r.fit_deviation = fit.deviation;
    } catch (const GeometryError&) {
        // Degenerate boundary: report without a fit.
    }
    return r;
}

MinimizerFit fit_wulff_ball_free(const NormSpec& H, const std::vector<Vec2>& all_points) {
    if (all_points.size() < 8)
        throw GeometryError("ball fit: degenerate boundary (<8 free vertices)");
    const std::vector<Vec2> points = subsample_points(all_points);
    const double scale = points_scale(points);
    auto obj = [&](const std::vector<double>& p) {
        return ball_fit_objective(H, points, {p[0], p[1]}, nullptr);
    };
    Rng rng(0x2545F491u);
    Vec2 best_center{};
    double best = -1.0;
    for (int s = 0; s < 5; ++s) {
        std::vector<double> start = {rng.uniform(-0.2, 0.2) * scale, rng.uniform(-0.2, 0.2) * scale};
        const std::vector<double> sol = nelder_mead(obj, start, 0.2 * scale, 400);
        const double v = obj(sol);
        if (best < 0.0 || v < best) {
            best = v;
            best_center = {sol[0], sol[1]};
        }
    }
    return finish_fit(H, points, best_center);
}

MinimizerFit fit_wulff_ball_on_line(const NormSpec& H, const std::vector<Vec2>& all_points,
                                    Vec2 line_direction) {
    if (all_points.size() < 8)
        throw GeometryError("ball fit: degenerate boundary (<8 free vertices)");
    const std::vector<Vec2> points = subsample_points(all_points);
    const double scale = points_scale(points);
    auto obj = [&](const std::vector<double>& p) {
        return ball_fit_objective(H, points, p[0] * line_direction, nullptr);
    };
    Rng rng(0x2545F491u);
    double best_t = 0.0, best = -1.0;
    for (int s = 0; s < 5; ++s) {
        const std::vector<double> sol =
            nelder_mead(obj, {rng.uniform(-0.2, 0.2) * scale}, 0.2 * scale, 400);
        const double v = obj(sol);
        if (best < 0.0 || v < best) {
            best = v;
            best_t = sol[0];
        }
    }
    return finish_fit(H, points, best_t * line_direction);
}

MinimizerFit characterize_minimizer(const NormSpec& H, const WeightSpec& w, const ConeSpec& cone,
                                    const PolygonalSet& E) {
    (void)w;
    // Boundary vertices away from the cone boundary.
    std::vector<Vec2> pts;
    const double tol = 1e-9 * polygon_diameter(E.vertices);
    for (const Vec2& v : E.vertices)
        if (cone.kind == ConeKind::FullPlane || cone_boundary_distance(cone, v) > tol)
            pts.push_back(v);
    if (pts.size() < 8) throw GeometryError("characterize_minimizer: degenerate boundary (<8 free vertices)");

    const LinealityDecomposition lin = lineality_decomposition(cone);
    if (lin.k == 0) return finish_fit(H, pts, {0.0, 0.0});
    if (lin.k == 1) return fit_wulff_ball_on_line(H, pts, lin.line_direction);
    return fit_wulff_ball_free(H, pts);
}

PolygonalSet random_star_set(const NormSpec& H, const ConeSpec& cone, std::uint64_t seed,
                             int n_boundary) {
    Rng rng(seed);
    // Modes 2..5 avoid the near-translation m = 1 mode, whose isoperimetric
    // deficit is only fourth order in the amplitude.
    double amp[4];
    double phase[4];
    double total = 0.0;
    for (int m = 0; m < 4; ++m) {
        amp[m] = rng.next_double();
        phase[m] = rng.uniform(0.0, 2.0 * kPi);
        total += amp[m];
    }
    const double budget = rng.uniform(0.06, 0.3);
    for (double& a : amp) a *= budget / total;

    auto rho = [&](double theta) {
        double v = 1.0;
        for (int m = 0; m < 4; ++m) v += amp[m] * std::cos((m + 2) * theta + phase[m]);
        return v;
    };

    std::vector<Vec2> pts;
    if (cone.kind == ConeKind::FullPlane) {
        pts.reserve(static_cast<std::size_t>(n_boundary));
        for (int i = 0; i < n_boundary; ++i) {
            const double theta = 2.0 * kPi * i / n_boundary;
            const Vec2 d = unit_dir(theta);
            pts.push_back((rho(theta) / dual_norm(H, d)) * d);
        }
    } else {
        pts.reserve(static_cast<std::size_t>(n_boundary) + 1);
        for (int i = 0; i < n_boundary; ++i) {
            const double theta =
                cone.theta1 + (cone.theta2 - cone.theta1) * i / static_cast<double>(n_boundary - 1);
            const Vec2 d = unit_dir(theta);
            pts.push_back((rho(theta) / dual_norm(H, d)) * d);
        }
        pts.push_back({0.0, 0.0});
    }
    return make_polygonal_set(std::move(pts), cone);
}

} // namespace wulff
