#pragma once

#include <vector>

#include "wulff/cone.hpp"
#include "wulff/norm.hpp"
#include "wulff/vec2.hpp"
#include "wulff/weight.hpp"

namespace wulff {

/// A closed simple polygon, counterclockwise, with each edge classified as
/// interior to the cone or lying on the cone boundary. Edge i runs from
/// vertex i to vertex (i + 1) mod n. Edges on the cone boundary contribute
/// nothing to the weighted anisotropic perimeter.
struct PolygonalSet {
    std::vector<Vec2> vertices;
    std::vector<bool> edge_on_cone_boundary;
};

/// Builds a tagged polygon from a counterclockwise vertex loop. Edges whose
/// endpoints and midpoint lie within 1e-9 * diameter of the cone boundary
/// are tagged on-boundary. Throws GeometryError for degenerate input
/// (fewer than 3 vertices or nonpositive signed area).
PolygonalSet make_polygonal_set(std::vector<Vec2> vertices, const ConeSpec& cone);

double polygon_signed_area(const std::vector<Vec2>& vertices);
double polygon_diameter(const std::vector<Vec2>& vertices);
bool polygon_is_simple(const std::vector<Vec2>& vertices);
bool point_in_polygon(const std::vector<Vec2>& vertices, Vec2 p);

/// Weighted volume int_E w, via fan triangulation from the vertex centroid
/// and degree-5 triangle quadrature with two uniform refinements.
/// Requires E inside the closed cone (tolerance-checked) and simple.
double weighted_volume(const WeightSpec& w, const PolygonalSet& E, const ConeSpec& cone);

/// Weighted anisotropic perimeter P_{w,H}(E; cone): the sum over interior
/// edges of H(nu_edge) * w(midpoint) * length. Boundary-tagged edges are
/// excluded, matching integration over the reduced boundary inside the cone.
double weighted_perimeter(const NormSpec& H, const WeightSpec& w, const PolygonalSet& E,
                          const ConeSpec& cone);

/// The Wulff sector B_r intersected with the cone, as a tagged polygon with
/// n_arc points on the Wulff shape. For proper cones the vertex of the cone
/// closes the polygon along the two rays.
PolygonalSet wulff_sector_polygon(const NormSpec& H, const ConeSpec& cone, double r, int n_arc);

} // namespace wulff
