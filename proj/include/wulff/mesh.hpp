#pragma once

#include <array>
#include <vector>

#include "wulff/cone.hpp"
#include "wulff/norm.hpp"
#include "wulff/vec2.hpp"

namespace wulff {

enum class BoundaryTag { Gamma0, Gamma1 };

struct BoundaryEdge {
    int a = 0, b = 0;   // oriented so the domain lies on the left
    int tri = 0;        // owning triangle
    BoundaryTag tag = BoundaryTag::Gamma0;
};

/// Conforming triangulation of cone n B_R with counterclockwise triangles.
/// Boundary edges are tagged Gamma0 (on the Wulff shape) or Gamma1 (on the
/// cone boundary). Dirichlet data lives on the Gamma0 vertex set.
struct Mesh {
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<BoundaryEdge> boundary_edges;
    std::vector<bool> vertex_on_gamma0;
    double h = 0.0;
    double R = 1.0;
};

/// Meshes cone n B_R with target size h. Rings of constant Wulff radius are
/// resampled so that the physical spacing matches the local radial step for
/// any of the supported norms. A factor-2 refinement is applied within R/8
/// of the vertex (when the cone has one and grading is enabled), and the
/// outermost ring is split geometrically so one-sided boundary gradients
/// are sampled close to Gamma0.
/// Throws GeometryError if the resulting minimum angle drops below 20 deg.
Mesh generate_mesh(const ConeSpec& cone, const NormSpec& H, double R, double h,
                   bool grading = true);

double mesh_min_angle_deg(const Mesh& mesh);

std::array<Vec2, 3> mesh_worst_triangle(const Mesh& mesh);

/// Constant gradient of a P1 vertex field on each triangle.
std::vector<Vec2> triangle_gradients(const Mesh& mesh, const std::vector<double>& u);

} // namespace wulff
