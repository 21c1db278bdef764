#include "wulff/polygon.hpp"

#include <algorithm>
#include <cmath>

#include "wulff/errors.hpp"
#include "wulff/quadrature.hpp"

namespace wulff {

namespace {

// Proper intersection test for closed segments [a,b] and [c,d].
bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    auto orient = [](Vec2 p, Vec2 q, Vec2 r) {
        const double v = cross(q - p, r - p);
        if (v > 0.0) return 1;
        if (v < 0.0) return -1;
        return 0;
    };
    const int o1 = orient(a, b, c), o2 = orient(a, b, d);
    const int o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    auto on_segment = [](Vec2 p, Vec2 q, Vec2 r) {
        return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) &&
               std::min(p.y, q.y) <= r.y && r.y <= std::max(p.y, q.y);
    };
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

bool edge_on_boundary(const ConeSpec& cone, Vec2 a, Vec2 b, double tol) {
    if (cone.kind == ConeKind::FullPlane) return false;
    return cone_boundary_distance(cone, a) <= tol && cone_boundary_distance(cone, b) <= tol &&
           cone_boundary_distance(cone, 0.5 * (a + b)) <= tol;
}

} // namespace

double polygon_signed_area(const std::vector<Vec2>& v) {
    double s = 0.0;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) s += cross(v[i], v[(i + 1) % n]);
    return 0.5 * s;
}

double polygon_diameter(const std::vector<Vec2>& v) {
    double xmin = v[0].x, xmax = v[0].x, ymin = v[0].y, ymax = v[0].y;
    for (const Vec2& p : v) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    return std::hypot(xmax - xmin, ymax - ymin);
}

bool polygon_is_simple(const std::vector<Vec2>& v) {
    const std::size_t n = v.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = v[i], b = v[(i + 1) % n];
        const double axmin = std::min(a.x, b.x), axmax = std::max(a.x, b.x);
        const double aymin = std::min(a.y, b.y), aymax = std::max(a.y, b.y);
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue; // adjacent through the wrap
            const Vec2 c = v[j], d = v[(j + 1) % n];
            if (std::max(c.x, d.x) < axmin || std::min(c.x, d.x) > axmax ||
                std::max(c.y, d.y) < aymin || std::min(c.y, d.y) > aymax)
                continue;
            if (segments_intersect(a, b, c, d)) return false;
        }
    }
    return true;
}

bool point_in_polygon(const std::vector<Vec2>& v, Vec2 p) {
    bool inside = false;
    const std::size_t n = v.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        if ((v[i].y > p.y) != (v[j].y > p.y)) {
            const double xcross = v[j].x + (v[i].x - v[j].x) * (p.y - v[j].y) / (v[i].y - v[j].y);
            if (p.x < xcross) inside = !inside;
        }
    }
    return inside;
}

PolygonalSet make_polygonal_set(std::vector<Vec2> vertices, const ConeSpec& cone) {
    if (vertices.size() < 3) throw GeometryError("polygon: need at least 3 vertices");
    if (!(polygon_signed_area(vertices) > 0.0))
        throw GeometryError("polygon: vertices must be counterclockwise with positive area");
    PolygonalSet E;
    const double tol = 1e-9 * polygon_diameter(vertices);
    E.edge_on_cone_boundary.resize(vertices.size());
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const Vec2 a = vertices[i], b = vertices[(i + 1) % vertices.size()];
        E.edge_on_cone_boundary[i] = edge_on_boundary(cone, a, b, tol);
    }
    E.vertices = std::move(vertices);
    return E;
}

double weighted_volume(const WeightSpec& w, const PolygonalSet& E, const ConeSpec& cone) {
    const std::vector<Vec2>& v = E.vertices;
    if (!polygon_is_simple(v)) throw GeometryError("weighted_volume: non-simple polygon");
    const double tol = 1e-6;
    for (const Vec2& p : v)
        if (!cone_contains_closure(cone, p, tol))
            throw GeometryError("weighted_volume: polygon leaves the closed cone");
    Vec2 pivot{0.0, 0.0};
    for (const Vec2& p : v) pivot = pivot + p;
    pivot = pivot / static_cast<double>(v.size());
    auto f = [&w](Vec2 x) { return weight_eval(w, x); };
    double total = 0.0;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i)
        total += integrate_triangle(pivot, v[i], v[(i + 1) % n], f, /*refinements=*/2);
    return total;
}

double weighted_perimeter(const NormSpec& H, const WeightSpec& w, const PolygonalSet& E,
                          const ConeSpec& cone) {
    (void)cone;
    const std::vector<Vec2>& v = E.vertices;
    if (!polygon_is_simple(v)) throw GeometryError("weighted_perimeter: non-simple polygon");
    double total = 0.0;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (E.edge_on_cone_boundary[i]) continue;
        const Vec2 a = v[i], b = v[(i + 1) % n];
        const double len = norm(b - a);
        if (len == 0.0) continue;
        const Vec2 nu = -1.0 * perp_left((b - a) / len); // outer normal of a CCW loop
        total += eval_norm(H, nu) * weight_eval(w, 0.5 * (a + b)) * len;
    }
    return total;
}

PolygonalSet wulff_sector_polygon(const NormSpec& H, const ConeSpec& cone, double r, int n_arc) {
    if (!(r > 0.0)) throw GeometryError("wulff_sector_polygon: radius must be positive");
    if (n_arc < 8) throw GeometryError("wulff_sector_polygon: need at least 8 arc points");
    std::vector<Vec2> pts;
    if (cone.kind == ConeKind::FullPlane) {
        pts.reserve(static_cast<std::size_t>(n_arc));
        for (int i = 0; i < n_arc; ++i) {
            const Vec2 d = unit_dir(2.0 * 3.14159265358979323846 * i / n_arc);
            pts.push_back((r / dual_norm(H, d)) * d);
        }
    } else {
        pts.reserve(static_cast<std::size_t>(n_arc) + 1);
        for (int i = 0; i < n_arc; ++i) {
            const double theta =
                cone.theta1 + (cone.theta2 - cone.theta1) * i / static_cast<double>(n_arc - 1);
            const Vec2 d = unit_dir(theta);
            pts.push_back((r / dual_norm(H, d)) * d);
        }
        pts.push_back({0.0, 0.0}); // vertex of the cone closes the sector
    }
    return make_polygonal_set(std::move(pts), cone);
}

} // namespace wulff
