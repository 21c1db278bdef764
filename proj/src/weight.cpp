#include "wulff/weight.hpp"

#include <cmath>
#include <stdexcept>

#include "wulff/errors.hpp"
#include "wulff/rng.hpp"

namespace wulff {

namespace {
constexpr double kPi = 3.14159265358979323846;

double monomial_factor(double v, double exponent) {
    if (exponent == 0.0) return 1.0;
    if (v <= 0.0) return 0.0; // clamp round-off negatives on the boundary
    return std::pow(v, exponent);
}
} // namespace

WeightSpec make_constant_weight() { return WeightSpec{}; }

WeightSpec make_monomial_weight(double a, double b) {
    if (!(a >= 0.0) || !(b >= 0.0))
        throw ConfigError("monomial weight: exponents must be nonnegative");
    WeightSpec w;
    w.kind = WeightKind::Monomial;
    w.a = a;
    w.b = b;
    w.lambda = a + b;
    return w;
}

double weight_eval(const WeightSpec& w, Vec2 x) {
    if (w.kind == WeightKind::Constant) return 1.0;
    const double tol = 1e-9 * (1.0 + norm(x));
    if (x.x < -tol || x.y < -tol)
        throw std::invalid_argument("weight_eval: point outside the closed weight domain");
    return monomial_factor(x.x, w.a) * monomial_factor(x.y, w.b);
}

void validate_weight_cone(const WeightSpec& w, const ConeSpec& cone) {
    if (w.kind == WeightKind::Constant) return;
    if (cone.kind == ConeKind::FullPlane || cone.kind == ConeKind::HalfPlane ||
        cone.theta1 < -1e-12 || cone.theta2 > 0.5 * kPi + 1e-12)
        throw ConfigError("monomial weight requires a cone inside the closed positive quadrant");
}

double concavity_certificate(const WeightSpec& w, const ConeSpec& cone, int samples) {
    if (w.lambda == 0.0)
        throw std::invalid_argument("concavity_certificate: requires lambda > 0");
    validate_weight_cone(w, cone);
    const double inv_lambda = 1.0 / w.lambda;
    auto root = [&](Vec2 x) { return std::pow(weight_eval(w, x), inv_lambda); };
    Rng rng(0xc2b2ae35u);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double t1 = rng.uniform(cone.theta1 + 1e-9, cone.theta2 - 1e-9);
        const double t2 = rng.uniform(cone.theta1 + 1e-9, cone.theta2 - 1e-9);
        const Vec2 x = std::exp(rng.uniform(-1.0, 1.0)) * unit_dir(t1);
        const Vec2 y = std::exp(rng.uniform(-1.0, 1.0)) * unit_dir(t2);
        const double slack = root(0.5 * (x + y)) - 0.5 * (root(x) + root(y));
        if (i == 0 || slack < worst) worst = slack;
    }
    return worst;
}

} // namespace wulff
