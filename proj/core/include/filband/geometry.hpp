#ifndef FILBAND_GEOMETRY_HPP
#define FILBAND_GEOMETRY_HPP

#include <cmath>

namespace filband {

// Plane vector. Kept deliberately minimal; everything is pass-by-value.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2& operator+=(Vec2 v) { x += v.x; y += v.y; return *this; }
    Vec2& operator-=(Vec2 v) { x -= v.x; y -= v.y; return *this; }
    Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
inline Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
inline Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

// (a,b)^perp = (-b,a), a quarter turn counterclockwise.
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }

// Unit direction of a filament at angle phi.
inline Vec2 omega(double phi) { return {std::cos(phi), std::sin(phi)}; }

// Rotate a vector by angle theta.
inline Vec2 rotate(Vec2 a, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {c * a.x - s * a.y, s * a.x + c * a.y};
}

} // namespace filband

#endif
