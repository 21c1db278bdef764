#include "wulff/cone.hpp"

#include <cmath>
#include <limits>

#include "wulff/errors.hpp"

namespace wulff {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Signed distance of x to the half-plane {<x, n(angle)> > 0}: positive inside.
double ray_side(double boundary_angle, bool left_boundary, Vec2 x) {
    // For the ray at theta1 (right boundary walking counterclockwise), the
    // inside is on the left: <x, perp_left(d1)> >= 0. For theta2 the inside
    // is on the right.
    const Vec2 d = unit_dir(boundary_angle);
    const double s = cross(d, x); // = <x, perp_left(d)>
    return left_boundary ? -s : s;
}
} // namespace

ConeSpec make_full_plane() {
    ConeSpec c;
    c.kind = ConeKind::FullPlane;
    c.theta1 = 0.0;
    c.theta2 = 2.0 * kPi;
    return c;
}

ConeSpec make_half_plane(double inner_normal_angle) {
    ConeSpec c;
    c.kind = ConeKind::HalfPlane;
    c.theta1 = inner_normal_angle - 0.5 * kPi;
    c.theta2 = inner_normal_angle + 0.5 * kPi;
    return c;
}

ConeSpec make_sector(double theta1, double theta2) {
    const double opening = theta2 - theta1;
    if (!(opening > 0.0) || opening > kPi + 1e-12)
        throw ConfigError("sector cone: need 0 < theta2 - theta1 <= pi (convexity)");
    ConeSpec c;
    c.kind = ConeKind::Sector;
    c.theta1 = theta1;
    c.theta2 = theta2;
    return c;
}

double cone_opening(const ConeSpec& cone) {
    return cone.kind == ConeKind::FullPlane ? 2.0 * kPi : cone.theta2 - cone.theta1;
}

bool cone_contains(const ConeSpec& cone, Vec2 x) {
    if (x.x == 0.0 && x.y == 0.0) return false;
    if (cone.kind == ConeKind::FullPlane) return true;
    return ray_side(cone.theta1, /*left_boundary=*/false, x) > 0.0 &&
           ray_side(cone.theta2, /*left_boundary=*/true, x) > 0.0;
}

bool cone_contains_closure(const ConeSpec& cone, Vec2 x, double tol) {
    if (cone.kind == ConeKind::FullPlane) return true;
    const double slack = -tol * (1.0 + norm(x));
    return ray_side(cone.theta1, false, x) >= slack && ray_side(cone.theta2, true, x) >= slack;
}

double cone_boundary_distance(const ConeSpec& cone, Vec2 x) {
    if (cone.kind == ConeKind::FullPlane) return std::numeric_limits<double>::infinity();
    auto ray_distance = [&x](double angle) {
        const Vec2 d = unit_dir(angle);
        const double t = dot(x, d);
        if (t <= 0.0) return norm(x); // closest point on the ray is the vertex
        return norm(x - t * d);
    };
    return std::min(ray_distance(cone.theta1), ray_distance(cone.theta2));
}

LinealityDecomposition lineality_decomposition(const ConeSpec& cone) {
    LinealityDecomposition d;
    if (cone.kind == ConeKind::FullPlane) {
        d.k = 2;
        return d;
    }
    // Test membership of the +-direction lines spanned by the boundary rays.
    const double opening = cone_opening(cone);
    if (std::abs(opening - kPi) < 1e-12) {
        d.k = 1;
        d.line_direction = unit_dir(cone.theta1);
        // Rotate theta1 onto the positive x-axis: the cone becomes {y > 0}.
        d.rotation_angle = -cone.theta1;
        return d;
    }
    d.k = 0;
    return d;
}

} // namespace wulff
