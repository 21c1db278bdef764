#include "wulff/norm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wulff/errors.hpp"
#include "wulff/rng.hpp"

namespace wulff {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kGoldenAngleTol = 1e-10;

// Raw (unnormalized) smoothed-q value: s_i = xi_i^2 + delta^2 |xi|^2.
double smoothed_q_raw(const NormSpec& spec, Vec2 xi) {
    const double r2 = norm2(xi);
    if (r2 == 0.0) return 0.0;
    const double s1 = xi.x * xi.x + spec.delta * spec.delta * r2;
    const double s2 = xi.y * xi.y + spec.delta * spec.delta * r2;
    const double h = 0.5 * spec.q;
    return std::pow(std::pow(s1, h) + std::pow(s2, h), 1.0 / spec.q);
}

// Golden-section maximization of f on [a, b]; f assumed unimodal there.
template <typename F>
double golden_max(F&& f, double a, double b, double tol) {
    const double invphi = 0.6180339887498948482;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    return std::max(f1, f2);
}

// Scan f over [0, 2pi), then refine around the best sample.
template <typename F>
double scan_max_over_circle(F&& f, int scan_points) {
    double best = -1.0;
    int best_i = 0;
    for (int i = 0; i < scan_points; ++i) {
        const double v = f(2.0 * kPi * i / scan_points);
        if (v > best) {
            best = v;
            best_i = i;
        }
    }
    const double step = 2.0 * kPi / scan_points;
    const double lo = (best_i - 1) * step;
    const double hi = (best_i + 1) * step;
    return std::max(best, golden_max(f, lo, hi, kGoldenAngleTol));
}

void compute_equivalence_constants(NormSpec& spec) {
    auto h = [&spec](double theta) { return eval_norm(spec, unit_dir(theta)); };
    auto neg_h = [&h](double theta) { return -h(theta); };
    // By central symmetry a half circle suffices, but a full scan is cheap.
    const int n = 4096;
    double lo = h(0.0), hi = lo;
    int lo_i = 0, hi_i = 0;
    for (int i = 1; i < n; ++i) {
        const double v = h(2.0 * kPi * i / n);
        if (v < lo) { lo = v; lo_i = i; }
        if (v > hi) { hi = v; hi_i = i; }
    }
    const double step = 2.0 * kPi / n;
    spec.k2 = std::max(hi, golden_max(h, (hi_i - 1) * step, (hi_i + 1) * step, kGoldenAngleTol));
    spec.k1 = std::min(lo, -golden_max(neg_h, (lo_i - 1) * step, (lo_i + 1) * step, kGoldenAngleTol));
}

} // namespace

NormSpec make_euclidean() {
    NormSpec s;
    s.kind = NormKind::Euclidean;
    s.k1 = s.k2 = 1.0;
    return s;
}

NormSpec make_ellipse(double a11, double a12, double a22) {
    const double det = a11 * a22 - a12 * a12;
    if (!(a11 > 0.0) || !(det > 0.0))
        throw ConfigError("ellipse norm: matrix A must be symmetric positive definite");
    NormSpec s;
    s.kind = NormKind::Ellipse;
    s.a11 = a11;
    s.a12 = a12;
    s.a22 = a22;
    // k1, k2 are the square roots of the extreme eigenvalues of A.
    const double tr = a11 + a22;
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    s.k1 = std::sqrt(tr / 2.0 - disc);
    s.k2 = std::sqrt(tr / 2.0 + disc);
    return s;
}

NormSpec make_smoothed_q(double q, double delta) {
    if (!(q > 1.0) || !std::isfinite(q))
        throw ConfigError("smoothed-q norm: q must lie in (1, inf)");
    if (!(delta > 0.0))
        throw ConfigError("smoothed-q norm: delta must be positive");
    NormSpec s;
    s.kind = NormKind::SmoothedQ;
    s.q = q;
    s.delta = delta;
    s.unit_scale = smoothed_q_raw(s, {1.0, 0.0});
    compute_equivalence_constants(s);
    return s;
}

double eval_norm(const NormSpec& spec, Vec2 xi) {
    switch (spec.kind) {
    case NormKind::Euclidean:
        return norm(xi);
    case NormKind::Ellipse:
        return std::sqrt(std::max(0.0, spec.a11 * xi.x * xi.x + 2.0 * spec.a12 * xi.x * xi.y +
                                           spec.a22 * xi.y * xi.y));
    case NormKind::SmoothedQ:
        return smoothed_q_raw(spec, xi) / spec.unit_scale;
    }
    return 0.0;
}

Vec2 grad_norm(const NormSpec& spec, Vec2 xi) {
    if (xi.x == 0.0 && xi.y == 0.0)
        throw std::invalid_argument("grad_norm: degenerate argument xi = 0");
    switch (spec.kind) {
    case NormKind::Euclidean: {
        const double r = norm(xi);
        return xi / r;
    }
    case NormKind::Ellipse: {
        const double h = eval_norm(spec, xi);
        return Vec2{spec.a11 * xi.x + spec.a12 * xi.y, spec.a12 * xi.x + spec.a22 * xi.y} / h;
    }
    case NormKind::SmoothedQ: {
        const double r2 = norm2(xi);
        const double d2 = spec.delta * spec.delta;
        const double s1 = xi.x * xi.x + d2 * r2;
        const double s2 = xi.y * xi.y + d2 * r2;
        const double h = 0.5 * spec.q - 1.0;
        const double p1 = std::pow(s1, h);
        const double p2 = std::pow(s2, h);
        const double g = smoothed_q_raw(spec, xi);
        const double gpow = std::pow(g, 1.0 - spec.q);
        const Vec2 raw{gpow * (p1 * xi.x + d2 * xi.x * (p1 + p2)),
                       gpow * (p2 * xi.y + d2 * xi.y * (p1 + p2))};
        return raw / spec.unit_scale;
    }
    }
    return {};
}

double dual_norm(const NormSpec& spec, Vec2 x) {
    if (x.x == 0.0 && x.y == 0.0) return 0.0;
    switch (spec.kind) {
    case NormKind::Euclidean:
        return norm(x);
    case NormKind::Ellipse: {
        // H0(x) = sqrt(x' A^{-1} x).
        const double det = spec.a11 * spec.a22 - spec.a12 * spec.a12;
        const double qf = (spec.a22 * x.x * x.x - 2.0 * spec.a12 * x.x * x.y +
                           spec.a11 * x.y * x.y) / det;
        return std::sqrt(std::max(0.0, qf));
    }
    case NormKind::SmoothedQ: {
        auto objective = [&](double theta) {
            const Vec2 xi = unit_dir(theta);
            return dot(x, xi) / eval_norm(spec, xi);
        };
        return scan_max_over_circle(objective, 256);
    }
    }
    return 0.0;
}

double bidual_check(const NormSpec& spec, int samples) {
    if (samples < 1) throw std::invalid_argument("bidual_check: samples must be >= 1");
    Rng rng(0x5bd1e995u);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double theta = rng.uniform(0.0, 2.0 * kPi);
        const double scale = std::exp(rng.uniform(-1.0, 1.0));
        const Vec2 xi = scale * unit_dir(theta);
        auto objective = [&](double phi) {
            const Vec2 x = unit_dir(phi);
            return dot(x, xi) / dual_norm(spec, x);
        };
        const double reconstructed = scan_max_over_circle(objective, 256);
        const double h = eval_norm(spec, xi);
        worst = std::max(worst, std::abs(reconstructed - h) / h);
    }
    return worst;
}

std::vector<Vec2> wulff_boundary(const NormSpec& spec, Vec2 center, double r, int n) {
    if (!(r > 0.0)) throw std::invalid_argument("wulff_boundary: radius must be positive");
    if (n < 8) throw std::invalid_argument("wulff_boundary: need at least 8 points");
    std::vector<Vec2> pts(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const Vec2 d = unit_dir(2.0 * kPi * i / n);
        // Bracket the radial scale s with H0(center + s d - center) >= r.
        double lo = 0.0;
        double hi = r * spec.k2;
        int expansions = 0;
        while (dual_norm(spec, (center + hi * d) - center) < r) {
            hi *= 2.0;
            if (++expansions > 60)
                throw GeometryError("wulff_boundary: bisection failed to bracket");
        }
        while (hi - lo > 1e-13 * hi) {
            const double mid = 0.5 * (lo + hi);
            if (dual_norm(spec, (center + mid * d) - center) < r)
                lo = mid;
            else
                hi = mid;
        }
        pts[static_cast<std::size_t>(i)] = center + 0.5 * (lo + hi) * d;
    }
    return pts;
}

} // namespace wulff
