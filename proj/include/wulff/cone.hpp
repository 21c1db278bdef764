#pragma once

#include "wulff/vec2.hpp"

namespace wulff {

enum class ConeKind { FullPlane, HalfPlane, Sector };

/// An open convex planar cone with vertex at the origin, described by the
/// angular interval (theta1, theta2) of its ray directions. The full plane
/// uses the whole circle; a half-plane is stored via its inner normal.
struct ConeSpec {
    ConeKind kind = ConeKind::FullPlane;
    double theta1 = 0.0;
    double theta2 = 2.0 * 3.14159265358979323846;
};

ConeSpec make_full_plane();
ConeSpec make_half_plane(double inner_normal_angle);
ConeSpec make_sector(double theta1, double theta2); // requires 0 < theta2 - theta1 <= pi

double cone_opening(const ConeSpec& cone);

/// Membership in the open cone. The origin is never a member (the cone is
/// generated by strictly positive dilations).
bool cone_contains(const ConeSpec& cone, Vec2 x);

/// Membership in the closed cone, with a small relative tolerance.
bool cone_contains_closure(const ConeSpec& cone, Vec2 x, double tol = 1e-9);

/// Distance from x to the cone boundary; +inf for the full plane.
double cone_boundary_distance(const ConeSpec& cone, Vec2 x);

struct LinealityDecomposition {
    int k = 0;                  // dimension of the largest line subspace
    double rotation_angle = 0;  // rotation mapping the cone to R^k x residual
    Vec2 line_direction;        // unit direction of the line factor (k = 1)
};

/// Decomposes the cone as R^k x (cone containing no lines), up to rotation.
/// k = 2 for the full plane, 1 for half-planes (including sectors of opening
/// exactly pi), 0 for proper sectors.
LinealityDecomposition lineality_decomposition(const ConeSpec& cone);

} // namespace wulff
