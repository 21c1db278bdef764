#pragma once

#include <vector>

#include "wulff/mesh.hpp"
#include "wulff/polygon.hpp"
#include "wulff/problem.hpp"

namespace wulff {

/// A marching-triangles level polyline, oriented so {u > t} lies on the
/// left. tris[s] owns the segment points[s] -> points[s+1]; closed chains
/// wrap around (tris.size() == points.size()).
struct LevelPolyline {
    std::vector<Vec2> points;
    std::vector<int> tris;
    bool closed = false;
};

/// Extracts {u = t} by linear interpolation on each triangle and chains the
/// segments into polylines. Throws GeometryError when the level is empty
/// (t outside (min u, max u)).
std::vector<LevelPolyline> extract_level_set(const Mesh& mesh, const std::vector<double>& u,
                                             double t);

/// The superlevel set {u > t} as a tagged polygon. For t <= 0 this is the
/// whole domain. Open level curves are closed along the cone boundary,
/// through the vertex when the endpoints sit on different rays.
PolygonalSet superlevel_region(const Mesh& mesh, const ConeSpec& cone,
                               const std::vector<double>& u, double t);

struct SuperlevelIntegrals {
    double mu = 0.0; // w({u > t})
    double I = 0.0;  // int_{u > t} f(u) w
};

/// mu(t) and I(t) by clipping every triangle against {u > t}.
SuperlevelIntegrals superlevel_integrals(const ProblemSpec& problem, const Mesh& mesh,
                                         const std::vector<double>& u, double t);

/// Chains the mesh boundary into the (counterclockwise) domain polygon.
PolygonalSet domain_polygon(const Mesh& mesh, const ConeSpec& cone);

} // namespace wulff
