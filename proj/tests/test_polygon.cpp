#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "wulff/errors.hpp"
#include "wulff/io.hpp"
#include "wulff/isoperimetry.hpp"
#include "wulff/polygon.hpp"
#include "wulff/rng.hpp"

using namespace wulff;

namespace {
const double kPi = 3.14159265358979323846;

PolygonalSet scaled(const PolygonalSet& E, double t, const ConeSpec& cone) {
    std::vector<Vec2> v;
    for (const Vec2& p : E.vertices) v.push_back(t * p);
    return make_polygonal_set(std::move(v), cone);
}
} // namespace

TEST_CASE("weighted volume: quarter disc area and monomial integral") {
    const ConeSpec quad = make_sector(0.0, 0.5 * kPi);
    const NormSpec eu = make_euclidean();
    const PolygonalSet quarter = wulff_sector_polygon(eu, quad, 1.0, 256);
    CHECK(weighted_volume(make_constant_weight(), quarter, quad) ==
          doctest::Approx(kPi / 4.0).epsilon(1e-3));

    // int_{quadrant n disc} xy = 1/8, confirmed by a Monte-Carlo oracle.
    const WeightSpec xy = make_monomial_weight(1, 1);
    Rng rng(7);
    double mc = 0.0;
    const int n_mc = 1000000;
    for (int i = 0; i < n_mc; ++i) {
        const double x = rng.next_double(), y = rng.next_double();
        if (x * x + y * y < 1.0) mc += x * y;
    }
    mc /= n_mc;
    CHECK(mc == doctest::Approx(0.125).epsilon(2e-2));
    CHECK(weighted_volume(xy, quarter, quad) == doctest::Approx(0.125).epsilon(1e-3));

    // scaling: t^{2+lambda}
    const PolygonalSet half_size = scaled(quarter, 0.5, quad);
    CHECK(weighted_volume(xy, half_size, quad) ==
          doctest::Approx(0.125 * std::pow(0.5, 4.0)).epsilon(1e-3));
}

TEST_CASE("weighted perimeter and the perimeter-volume relation") {
    const NormSpec eu = make_euclidean();
    const ConeSpec full = make_full_plane();
    const ConeSpec quad = make_sector(0.0, 0.5 * kPi);
    const WeightSpec one = make_constant_weight();

    const PolygonalSet disc = wulff_sector_polygon(eu, full, 1.0, 4096);
    CHECK(weighted_perimeter(eu, one, disc, full) == doctest::Approx(2 * kPi).epsilon(2e-3 / 6.28));

    const PolygonalSet quarter = wulff_sector_polygon(eu, quad, 1.0, 4096);
    // straight sides on the cone boundary are excluded
    CHECK(weighted_perimeter(eu, one, quarter, quad) ==
          doctest::Approx(0.5 * kPi).epsilon(2e-3 / 1.57));

    // P = D w(Sigma n B) with D = 2
    CHECK(weighted_perimeter(eu, one, quarter, quad) ==
          doctest::Approx(2.0 * weighted_volume(one, quarter, quad)).epsilon(1e-3));

    // scaling: P(tE) = t^{D-1} P(E)
    const WeightSpec xy = make_monomial_weight(1, 1);
    const PolygonalSet doubled = scaled(quarter, 2.0, quad);
    CHECK(weighted_perimeter(eu, xy, doubled, quad) ==
          doctest::Approx(std::pow(2.0, 3.0) * weighted_perimeter(eu, xy, quarter, quad))
              .epsilon(1e-3));
}

TEST_CASE("norm equivalence sandwich on random polygons") {
    const NormSpec H = make_smoothed_q(3.0, 0.05);
    const WeightSpec one = make_constant_weight();
    const ConeSpec full = make_full_plane();
    const NormSpec eu = make_euclidean();
    for (int s = 0; s < 10; ++s) {
        const PolygonalSet E = random_star_set(H, full, 100 + static_cast<std::uint64_t>(s), 128);
        const double pe = weighted_perimeter(eu, one, E, full);
        const double ph = weighted_perimeter(H, one, E, full);
        CHECK(ph >= H.k1 * pe - 1e-12);
        CHECK(ph <= H.k2 * pe + 1e-12);
    }
}

TEST_CASE("volume additivity under disjoint union") {
    const ConeSpec quad = make_sector(0.0, 0.5 * kPi);
    const WeightSpec xy = make_monomial_weight(1, 1);
    auto rect = [&](double x0, double x1, double y0, double y1) {
        return make_polygonal_set({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}, quad);
    };
    const double whole = weighted_volume(xy, rect(0, 1, 0, 1), quad);
    const double left = weighted_volume(xy, rect(0, 0.4, 0, 1), quad);
    const double right = weighted_volume(xy, rect(0.4, 1, 0, 1), quad);
    CHECK(whole == doctest::Approx(left + right).epsilon(1e-12));
    CHECK(whole == doctest::Approx(0.25)); // int xy over the unit square
}

TEST_CASE("non-simple polygons are rejected") {
    const ConeSpec full = make_full_plane();
    const PolygonalSet bowtie = [&] {
        PolygonalSet E;
        E.vertices = {{0, 0}, {1, 1}, {1, 0}, {0, 1}};
        E.edge_on_cone_boundary.assign(4, false);
        return E;
    }();
    CHECK_FALSE(polygon_is_simple(bowtie.vertices));
    CHECK_THROWS_AS((void)weighted_volume(make_constant_weight(), bowtie, full), GeometryError);
    CHECK_THROWS_AS((void)weighted_perimeter(make_euclidean(), make_constant_weight(), bowtie,
                                             full),
                    GeometryError);
    CHECK_THROWS_AS((void)make_polygonal_set({{0, 0}, {0, 1}, {1, 1}, {1, 0}}, full),
                    GeometryError); // clockwise
}

TEST_CASE("edge tagging against the cone boundary") {
    const ConeSpec quad = make_sector(0.0, 0.5 * kPi);
    const PolygonalSet quarter = wulff_sector_polygon(make_euclidean(), quad, 1.0, 64);
    int tagged = 0;
    for (bool b : quarter.edge_on_cone_boundary) tagged += b;
    CHECK(tagged == 2); // the two radial closure edges through the vertex
}

TEST_CASE("polygon CSV round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "wulff_poly_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "poly.csv").string();
    const std::vector<Vec2> pts = {{0, 0}, {1.25, -0.5}, {0.3333333333333333, 2}};
    write_polygon_csv(path, pts);
    const std::vector<Vec2> back = read_polygon_csv(path);
    REQUIRE(back.size() == pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(back[i].x == pts[i].x);
        CHECK(back[i].y == pts[i].y);
    }
}
