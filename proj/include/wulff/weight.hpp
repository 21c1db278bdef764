#pragma once

#include "wulff/cone.hpp"
#include "wulff/vec2.hpp"

namespace wulff {

enum class WeightKind { Constant, Monomial };

/// A nonnegative weight, positively homogeneous of degree lambda.
/// Supported families: the constant weight 1 (lambda = 0) and monomials
/// x^a y^b with a, b >= 0 (lambda = a + b), defined on cones contained in
/// the closed positive quadrant.
struct WeightSpec {
    WeightKind kind = WeightKind::Constant;
    double a = 0.0;
    double b = 0.0;
    double lambda = 0.0;
};

WeightSpec make_constant_weight();
WeightSpec make_monomial_weight(double a, double b);

/// w(x). Throws std::invalid_argument when x lies outside the closed domain
/// of the weight (the positive quadrant for monomials) beyond round-off.
double weight_eval(const WeightSpec& w, Vec2 x);

/// Checks monomial weights against the cone: the cone must sit inside the
/// closed positive quadrant. Throws ConfigError otherwise.
void validate_weight_cone(const WeightSpec& w, const ConeSpec& cone);

/// Worst midpoint-concavity slack of w^{1/lambda} over `samples` random
/// pairs in the cone; nonnegative (up to round-off) iff the concavity
/// hypothesis holds. Throws std::invalid_argument for lambda = 0.
double concavity_certificate(const WeightSpec& w, const ConeSpec& cone, int samples);

} // namespace wulff
