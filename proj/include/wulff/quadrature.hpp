#pragma once

#include <array>
#include <cmath>

#include "wulff/vec2.hpp"

namespace wulff {

/// Degree-5 (7-point) quadrature over the triangle (a, b, c), with optional
/// uniform refinements (each level splits every triangle into four at the
/// edge midpoints). `f` is evaluated at physical points; the signed area of
/// the triangle carries through, so fan decompositions of simple polygons
/// integrate correctly regardless of local orientation.
template <typename F>
double integrate_triangle(Vec2 a, Vec2 b, Vec2 c, F&& f, int refinements = 0) {
    if (refinements > 0) {
        const Vec2 ab = 0.5 * (a + b), bc = 0.5 * (b + c), ca = 0.5 * (c + a);
        return integrate_triangle(a, ab, ca, f, refinements - 1) +
               integrate_triangle(ab, b, bc, f, refinements - 1) +
               integrate_triangle(ca, bc, c, f, refinements - 1) +
               integrate_triangle(ab, bc, ca, f, refinements - 1);
    }
    static const double s15 = std::sqrt(15.0);
    static const std::array<double, 3> beta = {1.0 / 3.0, (6.0 + s15) / 21.0, (6.0 - s15) / 21.0};
    static const std::array<double, 3> wgt = {9.0 / 40.0, (155.0 + s15) / 1200.0,
                                              (155.0 - s15) / 1200.0};
    const double signed_area = 0.5 * cross(b - a, c - a);
    double sum = wgt[0] * f((a + b + c) / 3.0);
    for (int g = 1; g < 3; ++g) {
        const double bb = beta[static_cast<std::size_t>(g)];
        const double aa = 1.0 - 2.0 * bb;
        sum += wgt[static_cast<std::size_t>(g)] *
               (f(aa * a + bb * b + bb * c) + f(bb * a + aa * b + bb * c) +
                f(bb * a + bb * b + aa * c));
    }
    return signed_area * sum;
}

} // namespace wulff
