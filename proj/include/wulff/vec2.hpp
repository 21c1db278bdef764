#pragma once

#include <cmath>

namespace wulff {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
inline Vec2 operator*(double t, Vec2 a) { return {t * a.x, t * a.y}; }
inline Vec2 operator*(Vec2 a, double t) { return {t * a.x, t * a.y}; }
inline Vec2 operator/(Vec2 a, double t) { return {a.x / t, a.y / t}; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return a.x * a.x + a.y * a.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

inline Vec2 unit_dir(double theta) { return {std::cos(theta), std::sin(theta)}; }

// Rotation by angle t about the origin.
inline Vec2 rotate(Vec2 a, double t) {
    const double c = std::cos(t), s = std::sin(t);
    return {c * a.x - s * a.y, s * a.x + c * a.y};
}

// Left normal of a direction (90 degrees counterclockwise).
inline Vec2 perp_left(Vec2 a) { return {-a.y, a.x}; }

} // namespace wulff
