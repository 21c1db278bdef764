#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "wulff/cone.hpp"
#include "wulff/errors.hpp"
#include "wulff/weight.hpp"

using namespace wulff;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_CASE("cone membership") {
    const ConeSpec quad = make_sector(0.0, 0.5 * kPi);
    CHECK(cone_contains(quad, {1, 1}));
    CHECK_FALSE(cone_contains(quad, {-1, 1}));
    CHECK_FALSE(cone_contains(quad, {0, 0}));
    CHECK(cone_contains(make_full_plane(), {0.3, -2}));
    const ConeSpec half = make_half_plane(0.5 * kPi); // {y > 0}
    CHECK(cone_contains(half, {5, 0.1}));
    CHECK_FALSE(cone_contains(half, {5, -0.1}));
    CHECK(cone_contains_closure(half, {5, 0}));
    CHECK_THROWS_AS((void)make_sector(0.0, 4.0), ConfigError); // opening > pi
}

TEST_CASE("lineality decomposition") {
    CHECK(lineality_decomposition(make_full_plane()).k == 2);
    const auto half = lineality_decomposition(make_half_plane(0.5 * kPi));
    CHECK(half.k == 1);
    CHECK(half.rotation_angle == doctest::Approx(0.0)); // {y>0} is already standard
    CHECK(half.line_direction.x == doctest::Approx(1.0));
    CHECK(lineality_decomposition(make_sector(0.0, kPi / 3.0)).k == 0);
    // a sector of opening exactly pi is a half-plane
    CHECK(lineality_decomposition(make_sector(0.25, 0.25 + kPi)).k == 1);
}

TEST_CASE("cone boundary distance") {
    const ConeSpec quad = make_sector(0.0, 0.5 * kPi);
    CHECK(cone_boundary_distance(quad, {1, 0}) == doctest::Approx(0.0));
    CHECK(cone_boundary_distance(quad, {1, 1}) == doctest::Approx(1.0));
    CHECK(std::isinf(cone_boundary_distance(make_full_plane(), {1, 1})));
}

TEST_CASE("weight evaluation and homogeneity") {
    const WeightSpec one = make_constant_weight();
    CHECK(weight_eval(one, {0.3, 0.7}) == doctest::Approx(1.0));
    const WeightSpec xy = make_monomial_weight(1, 1);
    CHECK(xy.lambda == doctest::Approx(2.0));
    CHECK(weight_eval(xy, {2, 3}) == doctest::Approx(6.0));
    CHECK(weight_eval(xy, {4, 6}) == doctest::Approx(24.0)); // 2^lambda * w(2,3)
    CHECK_THROWS_AS((void)weight_eval(xy, {-1, 0.5}), std::invalid_argument);
    CHECK(weight_eval(xy, {1e-18, 0.5}) >= 0.0); // boundary round-off clamps to zero
}

TEST_CASE("weight-cone compatibility") {
    const WeightSpec xy = make_monomial_weight(1, 1);
    CHECK_NOTHROW(validate_weight_cone(xy, make_sector(0.0, 0.5 * kPi)));
    CHECK_NOTHROW(validate_weight_cone(xy, make_sector(0.1, 1.2)));
    CHECK_THROWS_AS(validate_weight_cone(xy, make_full_plane()), ConfigError);
    CHECK_THROWS_AS(validate_weight_cone(xy, make_sector(-0.3, 1.0)), ConfigError);
    CHECK_NOTHROW(validate_weight_cone(make_constant_weight(), make_full_plane()));
}

TEST_CASE("concavity certificate") {
    const ConeSpec quad = make_sector(0.0, 0.5 * kPi);
    // (xy)^{1/2} is concave on the quadrant.
    CHECK(concavity_certificate(make_monomial_weight(1, 1), quad, 10000) >= -1e-12);
    // x itself is linear.
    CHECK(concavity_certificate(make_monomial_weight(1, 0), quad, 10000) >= -1e-12);
    CHECK_THROWS_AS((void)concavity_certificate(make_constant_weight(), quad, 10),
                    std::invalid_argument);
}
