#pragma once

#include <cstdint>
#include <vector>

#include "wulff/vec2.hpp"

namespace wulff {

enum class NormKind { Euclidean, Ellipse, SmoothedQ };

/// A uniformly elliptic norm H on the plane together with its dual H0.
///
/// Three families are supported:
///   - Euclidean:  H(xi) = |xi|
///   - Ellipse:    H(xi) = sqrt(xi' A xi) with A symmetric positive definite
///   - SmoothedQ:  a delta-regularized q-norm, normalized so H(e1) = 1;
///                 the regularization keeps H smooth away from the origin.
///
/// The equivalence constants k1 <= k2 with k1|xi| <= H(xi) <= k2|xi| are
/// computed at construction as the extrema of H on the Euclidean unit circle.
struct NormSpec {
    NormKind kind = NormKind::Euclidean;
    // Ellipse coefficients (row-major symmetric): [a11 a12; a12 a22].
    double a11 = 1.0, a12 = 0.0, a22 = 1.0;
    // Smoothed-q parameters.
    double q = 2.0;
    double delta = 0.0;
    double unit_scale = 1.0; // raw value at e1, used for normalization
    // Equivalence constants.
    double k1 = 1.0, k2 = 1.0;
};

NormSpec make_euclidean();
NormSpec make_ellipse(double a11, double a12, double a22);
NormSpec make_smoothed_q(double q, double delta);

/// H(xi). Exactly 1-homogeneous; H(0) = 0.
double eval_norm(const NormSpec& spec, Vec2 xi);

/// Gradient of H at xi != 0. Satisfies the Euler relation <grad, xi> = H(xi).
/// Throws std::invalid_argument for xi = 0.
Vec2 grad_norm(const NormSpec& spec, Vec2 xi);

/// Dual norm H0(x) = sup_{xi != 0} <x, xi> / H(xi). Closed form for the
/// Euclidean and ellipse kinds; otherwise a 256-point angular scan refined
/// by golden-section search.
double dual_norm(const NormSpec& spec, Vec2 x);

/// Max relative error of sup_x <x, xi>/H0(x) against H(xi) over `samples`
/// random directions xi.
double bidual_check(const NormSpec& spec, int samples);

struct WulffBall {
    Vec2 center;
    double radius = 1.0;
};

/// n points on the Wulff shape {H0(x - center) = r}, one per uniformly
/// spaced ray direction, each located by bisection on the radial scale.
/// Throws GeometryError if a ray fails to bracket within 60 doublings.
std::vector<Vec2> wulff_boundary(const NormSpec& spec, Vec2 center, double r, int n);

} // namespace wulff
