#include "wulff/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "wulff/errors.hpp"

namespace wulff {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Unit Wulff-shape direction: the point of {H0 = 1} along the ray at theta.
Vec2 wulff_dir(const NormSpec& H, double theta) {
    const Vec2 d = unit_dir(theta);
    return d / dual_norm(H, d);
}

// Inverse-CDF sampler for ring points. Points are spread along the Wulff
// shape with local density proportional to 1/|W(theta)|, so the tangential
// spacing of the mapped points tracks the radial spacing ring-to-ring.
class RingSampler {
public:
    RingSampler(const NormSpec& H, double t_lo, double t_hi, bool periodic)
        : H_(H), t_lo_(t_lo), t_hi_(t_hi), periodic_(periodic) {
        const int K = 4096;
        theta_.resize(K + 1);
        cum_.assign(K + 1, 0.0);
        std::vector<Vec2> pts(K + 1);
        for (int k = 0; k <= K; ++k) {
            theta_[k] = t_lo + (t_hi - t_lo) * k / K;
            pts[k] = wulff_dir(H, theta_[k]);
        }
        for (int k = 0; k < K; ++k) {
            const double mid = 0.5 * (theta_[k] + theta_[k + 1]);
            const double wlen = norm(wulff_dir(H, mid));
            cum_[k + 1] = cum_[k] + norm(pts[k + 1] - pts[k]) / wlen;
        }
        total_ = cum_.back();
        for (double& c : cum_) c /= total_;
    }

    double unit_measure() const { return total_; }

    double theta_at_fraction(double f) const {
        f = std::clamp(f, 0.0, 1.0);
        auto it = std::lower_bound(cum_.begin(), cum_.end(), f);
        if (it == cum_.begin()) return theta_.front();
        const std::size_t i = static_cast<std::size_t>(it - cum_.begin());
        const double c0 = cum_[i - 1], c1 = cum_[i];
        const double s = c1 > c0 ? (f - c0) / (c1 - c0) : 0.0;
        return theta_[i - 1] + s * (theta_[i] - theta_[i - 1]);
    }

    std::vector<Vec2> ring_points(double rho, int n) const {
        std::vector<Vec2> pts;
        if (periodic_) {
            pts.reserve(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i)
                pts.push_back(rho * wulff_dir(H_, theta_at_fraction(double(i) / n)));
        } else {
            pts.reserve(static_cast<std::size_t>(n) + 1);
            for (int i = 0; i <= n; ++i) {
                const double t = i == 0 ? t_lo_ : (i == n ? t_hi_ : theta_at_fraction(double(i) / n));
                pts.push_back(rho * wulff_dir(H_, t));
            }
        }
        return pts;
    }

private:
    const NormSpec& H_;
    double t_lo_, t_hi_;
    bool periodic_;
    std::vector<double> theta_;
    std::vector<double> cum_;
    double total_ = 0.0;
};

struct RingIndex {
    std::vector<int> ids;
    std::vector<double> frac;
};

struct RingPlan {
    double rho = 0.0;
    double target = 0.0; // tangential spacing target
};

// Radii with per-ring spacing targets. Count doublings (or halvings) are
// placed where the incoming radial gap equals the finer spacing, which
// keeps every transition triangle close to right-angled.
std::vector<RingPlan> plan_rings(double R, double h, bool vertex_graded) {
    std::vector<RingPlan> plan;
    plan.push_back({0.0, 0.0});
    double rho = 0.0;
    if (vertex_graded) {
        const double zone = R / 8.0;
        const int nf = std::max(1, static_cast<int>(std::lround(zone / (0.5 * h))));
        for (int i = 1; i <= nf; ++i) plan.push_back({zone * i / nf, 0.5 * h});
        // Bridge ring one fine gap beyond the zone, where the count halves.
        rho = zone + 0.5 * h;
        plan.push_back({rho, h});
    }
    {
        const double span = (R - h) - rho;
        const int nc = std::max(1, static_cast<int>(std::lround(span / h)));
        for (int i = 1; i <= nc; ++i) plan.push_back({rho + span * i / nc, h});
    }
    plan.push_back({R - 0.5 * h, 0.5 * h});
    plan.push_back({R - 0.25 * h, 0.25 * h});
    plan.push_back({R, 0.25 * h});
    return plan;
}

Mesh generate_mesh_polar(const ConeSpec& cone, const NormSpec& H, double R, double h,
                         bool grading) {
    const LinealityDecomposition lin = lineality_decomposition(cone);
    const bool periodic = cone.kind == ConeKind::FullPlane;
    const double t_lo = periodic ? 0.0 : cone.theta1;
    const double t_hi = periodic ? 2.0 * kPi : cone.theta2;
    const bool vertex_graded = grading && lin.k < 2;

    const std::vector<RingPlan> plan = plan_rings(R, h, vertex_graded);
    const RingSampler sampler(H, t_lo, t_hi, periodic);

    Mesh mesh;
    mesh.h = h;
    mesh.R = R;

    std::vector<RingIndex> rings(plan.size());
    mesh.vertices.push_back({0.0, 0.0});
    rings[0].ids = {0};
    rings[0].frac = {0.0};

    int n_prev = 0;
    for (std::size_t j = 1; j < plan.size(); ++j) {
        const double measure = plan[j].rho * sampler.unit_measure();
        const int min_segments = periodic ? 6 : 1;
        // Even counts, snapped to exact integer ratios across density jumps:
        // aligned ring fractions keep the strip triangles near-right-angled.
        // Narrow sectors may carry a single segment per ring.
        const long ideal = std::lround(measure / plan[j].target);
        int n = !periodic && ideal <= 1
                    ? 1
                    : std::max(min_segments,
                               2 * static_cast<int>(std::lround(measure / plan[j].target / 2.0)));
        n = std::max(n, min_segments);
        if (n_prev > 0) {
            const double ratio = static_cast<double>(n) / n_prev;
            if (ratio >= 1.6) {
                n = n_prev * std::max(2, static_cast<int>(std::lround(ratio)));
            } else if (ratio <= 0.625) {
                const int k = std::max(2, static_cast<int>(std::lround(1.0 / ratio)));
                n = std::max(min_segments, n_prev % k == 0 ? n_prev / k : n_prev / 2);
            } else if (ratio < 1.0) {
                n = n_prev;
            }
        }
        n_prev = n;
        const std::vector<Vec2> pts = sampler.ring_points(plan[j].rho, n);
        RingIndex& ring = rings[j];
        for (std::size_t i = 0; i < pts.size(); ++i) {
            ring.ids.push_back(static_cast<int>(mesh.vertices.size()));
            mesh.vertices.push_back(pts[i]);
            ring.frac.push_back(static_cast<double>(i) / n);
        }
    }

    auto add_triangle = [&mesh](int a, int b, int c) {
        const Vec2& A = mesh.vertices[static_cast<std::size_t>(a)];
        const Vec2& B = mesh.vertices[static_cast<std::size_t>(b)];
        const Vec2& C = mesh.vertices[static_cast<std::size_t>(c)];
        const double area2 = cross(B - A, C - A);
        if (area2 == 0.0) throw GeometryError("generate_mesh: degenerate triangle");
        if (area2 > 0.0)
            mesh.triangles.push_back({a, b, c});
        else
            mesh.triangles.push_back({a, c, b});
    };

    // Fan between the center point and the first ring.
    {
        const RingIndex& r1 = rings[1];
        const std::size_t m = r1.ids.size();
        const std::size_t count = periodic ? m : m - 1;
        for (std::size_t i = 0; i < count; ++i)
            add_triangle(0, r1.ids[i], r1.ids[(i + 1) % m]);
    }

    // Merge strips between consecutive rings, keyed on the ring fraction.
    for (std::size_t j = 1; j + 1 < rings.size(); ++j) {
        const RingIndex& inner = rings[j];
        const RingIndex& outer = rings[j + 1];
        const std::size_t ni = inner.ids.size(), no = outer.ids.size();
        auto ifrac = [&](std::size_t i) { return i < ni ? inner.frac[i] : inner.frac[i - ni] + 1.0; };
        auto ofrac = [&](std::size_t i) { return i < no ? outer.frac[i] : outer.frac[i - no] + 1.0; };
        const std::size_t iend = periodic ? ni : ni - 1;
        const std::size_t oend = periodic ? no : no - 1;
        std::size_t i = 0, o = 0;
        while (i < iend || o < oend) {
            bool advance_inner;
            if (o == oend) {
                advance_inner = true;
            } else if (i == iend) {
                advance_inner = false;
            } else {
                const double fi = ifrac(i + 1), fo = ofrac(o + 1);
                if (fi < fo - 1e-12)
                    advance_inner = true;
                else if (fo < fi - 1e-12)
                    advance_inner = false;
                else
                    advance_inner = ni <= no; // tie: longer next segment first
            }
            if (advance_inner) {
                add_triangle(inner.ids[i % ni], outer.ids[o % no], inner.ids[(i + 1) % ni]);
                ++i;
            } else {
                add_triangle(inner.ids[i % ni], outer.ids[o % no], outer.ids[(o + 1) % no]);
                ++o;
            }
        }
    }

    // Boundary edges: the ones owned by a single triangle.
    std::map<std::pair<int, int>, std::pair<int, int>> edge_count;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int e = 0; e < 3; ++e) {
            const int a = tri[static_cast<std::size_t>(e)];
            const int b = tri[static_cast<std::size_t>((e + 1) % 3)];
            auto key = std::minmax(a, b);
            auto [it, fresh] = edge_count.try_emplace({key.first, key.second}, 0, 0);
            it->second.first += 1;
            it->second.second = static_cast<int>(t);
        }
    }
    mesh.vertex_on_gamma0.assign(mesh.vertices.size(), false);
    const double boundary_tol = 1e-7 * R;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int e = 0; e < 3; ++e) {
            const int a = tri[static_cast<std::size_t>(e)];
            const int b = tri[static_cast<std::size_t>((e + 1) % 3)];
            auto key = std::minmax(a, b);
            if (edge_count[{key.first, key.second}].first != 1) continue;
            BoundaryEdge be;
            be.a = a;
            be.b = b;
            be.tri = static_cast<int>(t);
            const Vec2 mid = 0.5 * (mesh.vertices[static_cast<std::size_t>(a)] +
                                    mesh.vertices[static_cast<std::size_t>(b)]);
            const bool on_cone = cone.kind != ConeKind::FullPlane &&
                                 cone_boundary_distance(cone, mid) <= boundary_tol;
            be.tag = on_cone ? BoundaryTag::Gamma1 : BoundaryTag::Gamma0;
            if (be.tag == BoundaryTag::Gamma0) {
                mesh.vertex_on_gamma0[static_cast<std::size_t>(a)] = true;
                mesh.vertex_on_gamma0[static_cast<std::size_t>(b)] = true;
            }
            mesh.boundary_edges.push_back(be);
        }
    }
    return mesh;
}

// 2x2 SPD square root.
void spd_sqrt(double a11, double a12, double a22, double S[4]) {
    const double tr = a11 + a22;
    const double det = a11 * a22 - a12 * a12;
    const double s = std::sqrt(det);
    const double t = std::sqrt(tr + 2.0 * s);
    S[0] = (a11 + s) / t;
    S[1] = a12 / t;
    S[2] = a12 / t;
    S[3] = (a22 + s) / t;
}

} // namespace

Mesh generate_mesh(const ConeSpec& cone, const NormSpec& H, double R, double h, bool grading) {
    if (!(R > 0.0) || !(h > 0.0) || h > R / 4.0 + 1e-15)
        throw GeometryError("generate_mesh: need R > 0 and h <= R/4");

    Mesh mesh;
    if (H.kind == NormKind::Ellipse) {
        // Pull the problem back by A^{-1/2}: the Wulff ball becomes the
        // Euclidean disc and the polar construction has no shear. Rays map
        // to rays, so the cone and all boundary tags transport exactly.
        double S[4], Sinv[4];
        spd_sqrt(H.a11, H.a12, H.a22, S);
        const double det = S[0] * S[3] - S[1] * S[2];
        Sinv[0] = S[3] / det;
        Sinv[1] = -S[1] / det;
        Sinv[2] = -S[2] / det;
        Sinv[3] = S[0] / det;
        auto map_vec = [](const double M[4], Vec2 v) {
            return Vec2{M[0] * v.x + M[1] * v.y, M[2] * v.x + M[3] * v.y};
        };
        ConeSpec pulled = cone;
        if (cone.kind != ConeKind::FullPlane) {
            const Vec2 d1 = map_vec(Sinv, unit_dir(cone.theta1));
            const Vec2 d2 = map_vec(Sinv, unit_dir(cone.theta2));
            double t1 = std::atan2(d1.y, d1.x);
            double t2 = std::atan2(d2.y, d2.x);
            while (t2 <= t1) t2 += 2.0 * kPi;
            pulled.kind = ConeKind::Sector;
            pulled.theta1 = t1;
            pulled.theta2 = t2;
        }
        mesh = generate_mesh_polar(pulled, make_euclidean(), R, h, grading);
        for (Vec2& v : mesh.vertices) v = map_vec(S, v);
        mesh.h = h * H.k2; // conservative physical spacing bound
    } else {
        mesh = generate_mesh_polar(cone, H, R, h, grading);
    }

    const double min_angle = mesh_min_angle_deg(mesh);
    if (min_angle < 20.0) {
        const std::array<Vec2, 3> bad = mesh_worst_triangle(mesh);
        throw GeometryError("generate_mesh: minimum angle " + std::to_string(min_angle) +
                            " deg below 20 deg near (" + std::to_string(bad[0].x) + ", " +
                            std::to_string(bad[0].y) + ")");
    }
    return mesh;
}

double mesh_min_angle_deg(const Mesh& mesh) {
    double worst = 180.0;
    for (const auto& tri : mesh.triangles) {
        const Vec2 a = mesh.vertices[static_cast<std::size_t>(tri[0])];
        const Vec2 b = mesh.vertices[static_cast<std::size_t>(tri[1])];
        const Vec2 c = mesh.vertices[static_cast<std::size_t>(tri[2])];
        const Vec2 e[3] = {b - a, c - b, a - c};
        for (int i = 0; i < 3; ++i) {
            const Vec2 u = -1.0 * e[(i + 2) % 3];
            const Vec2 v = e[i];
            const double ang =
                std::acos(std::clamp(dot(u, v) / (norm(u) * norm(v)), -1.0, 1.0)) * 180.0 / kPi;
            worst = std::min(worst, ang);
        }
    }
    return worst;
}

std::array<Vec2, 3> mesh_worst_triangle(const Mesh& mesh) {
    double worst = 180.0;
    std::array<Vec2, 3> out{};
    for (const auto& tri : mesh.triangles) {
        Mesh probe;
        probe.vertices = {mesh.vertices[static_cast<std::size_t>(tri[0])],
                          mesh.vertices[static_cast<std::size_t>(tri[1])],
                          mesh.vertices[static_cast<std::size_t>(tri[2])]};
        probe.triangles = {{0, 1, 2}};
        const double ang = mesh_min_angle_deg(probe);
        if (ang < worst) {
            worst = ang;
            out = {probe.vertices[0], probe.vertices[1], probe.vertices[2]};
        }
    }
    return out;
}

std::vector<Vec2> triangle_gradients(const Mesh& mesh, const std::vector<double>& u) {
    std::vector<Vec2> g(mesh.triangles.size());
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        const Vec2 a = mesh.vertices[static_cast<std::size_t>(tri[0])];
        const Vec2 b = mesh.vertices[static_cast<std::size_t>(tri[1])];
        const Vec2 c = mesh.vertices[static_cast<std::size_t>(tri[2])];
        const double ua = u[static_cast<std::size_t>(tri[0])];
        const double ub = u[static_cast<std::size_t>(tri[1])];
        const double uc = u[static_cast<std::size_t>(tri[2])];
        const double area2 = cross(b - a, c - a);
        const Vec2 gv = (ua * perp_left(c - b) + ub * perp_left(a - c) + uc * perp_left(b - a));
        g[t] = gv / area2;
    }
    return g;
}

} // namespace wulff
