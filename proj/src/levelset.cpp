#include "wulff/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "wulff/errors.hpp"
#include "wulff/quadrature.hpp"

namespace wulff {

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey edge_key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

struct Segment {
    Vec2 a, b;
    EdgeKey key_a, key_b;
    int tri = 0;
};

// Crossing point of the level t on the (key-ordered) edge, so both adjacent
// triangles compute bit-identical coordinates.
Vec2 edge_crossing(const Mesh& mesh, const std::vector<double>& u, EdgeKey key, double t) {
    const Vec2 lo = mesh.vertices[static_cast<std::size_t>(key.first)];
    const Vec2 hi = mesh.vertices[static_cast<std::size_t>(key.second)];
    const double ulo = u[static_cast<std::size_t>(key.first)];
    const double uhi = u[static_cast<std::size_t>(key.second)];
    const double s = (t - ulo) / (uhi - ulo);
    return lo + std::clamp(s, 0.0, 1.0) * (hi - lo);
}

std::vector<Segment> march_triangles(const Mesh& mesh, const std::vector<double>& u, double t) {
    const std::vector<Vec2> grads = triangle_gradients(mesh, u);
    std::vector<Segment> segs;
    for (std::size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
        const auto& tri = mesh.triangles[ti];
        int above[3];
        int n_above = 0;
        for (int k = 0; k < 3; ++k) {
            above[k] = u[static_cast<std::size_t>(tri[static_cast<std::size_t>(k)])] > t;
            n_above += above[k];
        }
        if (n_above == 0 || n_above == 3) continue;
        EdgeKey keys[2];
        int found = 0;
        for (int k = 0; k < 3; ++k) {
            const int a = tri[static_cast<std::size_t>(k)];
            const int b = tri[static_cast<std::size_t>((k + 1) % 3)];
            if (above[k] != above[(k + 1) % 3]) keys[found++] = edge_key(a, b);
        }
        Segment s;
        s.tri = static_cast<int>(ti);
        s.key_a = keys[0];
        s.key_b = keys[1];
        s.a = edge_crossing(mesh, u, keys[0], t);
        s.b = edge_crossing(mesh, u, keys[1], t);
        // Orient the segment with {u > t} on its left.
        if (cross(s.b - s.a, grads[ti]) < 0.0) {
            std::swap(s.a, s.b);
            std::swap(s.key_a, s.key_b);
        }
        segs.push_back(s);
    }
    return segs;
}

} // namespace

std::vector<LevelPolyline> extract_level_set(const Mesh& mesh, const std::vector<double>& u,
                                             double t) {
    std::vector<Segment> segs = march_triangles(mesh, u, t);
    if (segs.empty()) throw GeometryError("extract_level_set: empty level");

    std::map<EdgeKey, std::size_t> by_start;
    std::map<EdgeKey, bool> is_end;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        by_start[segs[i].key_a] = i;
        is_end[segs[i].key_b] = true;
    }

    std::vector<bool> used(segs.size(), false);
    std::vector<LevelPolyline> out;

    auto walk = [&](std::size_t start, bool closed) {
        LevelPolyline pl;
        pl.closed = closed;
        std::size_t cur = start;
        pl.points.push_back(segs[cur].a);
        while (!used[cur]) {
            used[cur] = true;
            pl.tris.push_back(segs[cur].tri);
            auto next = by_start.find(segs[cur].key_b);
            if (next != by_start.end() && next->second == start) { // loop closed
                pl.closed = true;
                break;
            }
            if (next == by_start.end() || used[next->second]) {
                pl.points.push_back(segs[cur].b);
                break;
            }
            pl.points.push_back(segs[cur].b);
            cur = next->second;
        }
        out.push_back(std::move(pl));
    };

    // Open chains first: their start edge is nobody's end edge.
    for (std::size_t i = 0; i < segs.size(); ++i)
        if (!used[i] && !is_end.count(segs[i].key_a)) walk(i, false);
    for (std::size_t i = 0; i < segs.size(); ++i)
        if (!used[i]) walk(i, true);
    return out;
}

PolygonalSet domain_polygon(const Mesh& mesh, const ConeSpec& cone) {
    std::unordered_map<int, const BoundaryEdge*> next_from;
    for (const BoundaryEdge& e : mesh.boundary_edges) next_from[e.a] = &e;
    if (next_from.empty()) throw GeometryError("domain_polygon: mesh has no boundary");
    std::vector<Vec2> pts;
    const int start = mesh.boundary_edges.front().a;
    int cur = start;
    do {
        pts.push_back(mesh.vertices[static_cast<std::size_t>(cur)]);
        auto it = next_from.find(cur);
        if (it == next_from.end()) throw GeometryError("domain_polygon: open boundary chain");
        cur = it->second->b;
    } while (cur != start && pts.size() <= mesh.boundary_edges.size());
    return make_polygonal_set(std::move(pts), cone);
}

PolygonalSet superlevel_region(const Mesh& mesh, const ConeSpec& cone,
                               const std::vector<double>& u, double t) {
    if (t <= 0.0) return domain_polygon(mesh, cone);
    const double umax = *std::max_element(u.begin(), u.end());
    if (t >= umax) throw GeometryError("superlevel_region: empty region");

    std::vector<LevelPolyline> polys = extract_level_set(mesh, u, t);
    std::vector<const LevelPolyline*> open;
    const LevelPolyline* closed = nullptr;
    for (const auto& pl : polys) {
        if (pl.closed) {
            if (!closed || pl.points.size() > closed->points.size()) closed = &pl;
        } else {
            open.push_back(&pl);
        }
    }

    if (open.empty()) {
        if (!closed) throw GeometryError("superlevel_region: no usable level curve");
        std::vector<Vec2> pts = closed->points;
        if (polygon_signed_area(pts) < 0.0) std::reverse(pts.begin(), pts.end());
        return make_polygonal_set(std::move(pts), cone);
    }
    if (open.size() != 1)
        throw GeometryError("superlevel_region: level set is not a single component");

    // Close the open curve along the cone boundary. With {u > t} on the
    // left, appending the walk back along the boundary keeps the polygon
    // counterclockwise.
    std::vector<Vec2> pts = open.front()->points;
    const Vec2 first = pts.front(), last = pts.back();
    auto on_ray = [&cone](Vec2 x, double angle) {
        const Vec2 d = unit_dir(angle);
        const double along = dot(x, d);
        return along >= -1e-12 && norm(x - along * d) <= 1e-7 * (1.0 + norm(x));
    };
    const bool same_ray = (on_ray(first, cone.theta1) && on_ray(last, cone.theta1)) ||
                          (on_ray(first, cone.theta2) && on_ray(last, cone.theta2));
    if (!same_ray) pts.push_back({0.0, 0.0}); // pass through the cone vertex
    if (polygon_signed_area(pts) < 0.0)
        throw GeometryError("superlevel_region: unexpected orientation of the level curve");
    return make_polygonal_set(std::move(pts), cone);
}

SuperlevelIntegrals superlevel_integrals(const ProblemSpec& problem, const Mesh& mesh,
                                         const std::vector<double>& u, double t) {
    SuperlevelIntegrals out;
    const std::vector<Vec2> grads = triangle_gradients(mesh, u);
    for (std::size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
        const auto& tri = mesh.triangles[ti];
        const Vec2 v[3] = {mesh.vertices[static_cast<std::size_t>(tri[0])],
                           mesh.vertices[static_cast<std::size_t>(tri[1])],
                           mesh.vertices[static_cast<std::size_t>(tri[2])]};
        const double uv[3] = {u[static_cast<std::size_t>(tri[0])],
                              u[static_cast<std::size_t>(tri[1])],
                              u[static_cast<std::size_t>(tri[2])]};
        int n_above = 0;
        for (double val : uv) n_above += val > t;
        if (n_above == 0) continue;

        // Linear representation of u on the triangle.
        const Vec2 g = grads[ti];
        auto u_at = [&](Vec2 x) { return uv[0] + dot(g, x - v[0]); };
        auto w_at = [&](Vec2 x) { return weight_eval(problem.w, x); };
        auto fw_at = [&](Vec2 x) { return source_eval(problem.f, u_at(x)) * w_at(x); };

        std::vector<Vec2> region;
        if (n_above == 3) {
            region = {v[0], v[1], v[2]};
        } else {
            for (int k = 0; k < 3; ++k) {
                const int kn = (k + 1) % 3;
                if (uv[k] > t) region.push_back(v[k]);
                if ((uv[k] > t) != (uv[kn] > t)) {
                    const double s = (t - uv[k]) / (uv[kn] - uv[k]);
                    region.push_back(v[k] + s * (v[kn] - v[k]));
                }
            }
        }
        for (std::size_t i = 1; i + 1 < region.size(); ++i) {
            out.mu += integrate_triangle(region[0], region[i], region[i + 1], w_at, 1);
            out.I += integrate_triangle(region[0], region[i], region[i + 1], fw_at, 1);
        }
    }
    return out;
}

} // namespace wulff
