#ifndef TRACKGUIDE_GEOMETRY_HPP
#define TRACKGUIDE_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <numbers>

namespace trackguide {

/// Planar point / vector in meters.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double k) const { return {x * k, y * k}; }
    Vec2 operator/(double k) const { return {x / k, y / k}; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    /// z-component of the 3D cross product; positive when `o` is left of this.
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    double squared_norm() const { return x * x + y * y; }

    Vec2 normalized() const {
        const double n = norm();
        return n > 0.0 ? Vec2{x / n, y / n} : Vec2{0.0, 0.0};
    }
    /// Rotate by +90 degrees (left normal of a tangent).
    Vec2 left_normal() const { return {-y, x}; }
    Vec2 rotated(double angle) const {
        const double c = std::cos(angle), s = std::sin(angle);
        return {c * x - s * y, s * x + c * y};
    }
};

inline Vec2 operator*(double k, const Vec2& v) { return v * k; }

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

inline constexpr double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Wrap an angle into (-pi, pi].
inline double wrap_angle(double a) {
    const double two_pi = 2.0 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    if (a <= -std::numbers::pi) a += two_pi;
    if (a > std::numbers::pi) a -= two_pi;
    return a;
}

/// Signed circular difference a-b wrapped into (-period/2, period/2].
inline double wrap_diff(double a, double b, double period) {
    double d = std::fmod(a - b, period);
    if (d <= -period / 2.0) d += period;
    if (d > period / 2.0) d -= period;
    return d;
}

/// Rigid 2D pose: position plus heading (radians, world frame).
struct Pose2 {
    Vec2 position{};
    double heading = 0.0;

    /// World point -> body frame (x forward, y left).
    Vec2 to_body(const Vec2& world) const {
        return (world - position).rotated(-heading);
    }
    /// Body-frame point -> world.
    Vec2 to_world(const Vec2& body) const {
        return position + body.rotated(heading);
    }
};

/// Distance from point q to the segment [a, b].
inline double point_segment_distance(const Vec2& q, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = ab.squared_norm();
    if (len2 <= 0.0) return distance(q, a);
    double u = (q - a).dot(ab) / len2;
    u = std::clamp(u, 0.0, 1.0);
    return distance(q, a + ab * u);
}

}  // namespace trackguide

#endif  // TRACKGUIDE_GEOMETRY_HPP
