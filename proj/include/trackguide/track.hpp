#ifndef TRACKGUIDE_TRACK_HPP
#define TRACKGUIDE_TRACK_HPP

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "trackguide/curve.hpp"
#include "trackguide/geometry.hpp"

namespace trackguide {

/// Stadium-track dimensions. Defaults follow the standard 400 m layout:
/// 84.39 m straights and a 36.80 m lane-1 centerline curve radius.
struct TrackLayout {
    double straight_length = 84.39;  // m
    double inner_radius = 36.80;     // m, lane-1 centerline curve radius
    double lane_width = 1.22;        // m
    int num_lanes = 8;

    void validate() const {
        if (!(straight_length >= 0.0)) {
            throw std::invalid_argument("TrackLayout: straight_length must be >= 0");
        }
        if (!(inner_radius > 0.0)) {
            throw std::invalid_argument("TrackLayout: inner_radius must be > 0");
        }
        if (!(lane_width >= 0.9)) {
            throw std::invalid_argument("TrackLayout: lane_width must be >= 0.9 m");
        }
        if (num_lanes < 1) {
            throw std::invalid_argument("TrackLayout: need at least one lane");
        }
    }
};

/// Lane geometry: closed centerline plus boundary polylines ordered along the
/// (counter-clockwise) direction of travel. Polylines do not repeat the seam
/// point; consumers treat them as cyclic.
struct LaneGeometry {
    Curve2D centerline;
    std::vector<Vec2> left_boundary;   // +lane_width/2 lateral offset (inward)
    std::vector<Vec2> right_boundary;  // -lane_width/2 lateral offset (outward)
};

namespace detail {

/// Piecewise-analytic stadium: two straights of length L joined by two
/// semicircles of radius R, traversed counter-clockwise starting mid-bottom
/// straight at (0, -R) heading +x. Parameterized by true arc length.
struct Stadium {
    double half_straight;  // L/2
    double radius;

    double length() const {
        return 4.0 * half_straight + 2.0 * std::numbers::pi * radius;
    }

    Vec2 position(double s) const {
        const double pi = std::numbers::pi;
        const double arc = pi * radius;
        if (s <= half_straight) return {s, -radius};
        s -= half_straight;
        if (s <= arc) {
            const double phi = -pi / 2.0 + s / radius;
            return Vec2{half_straight, 0.0} + Vec2{std::cos(phi), std::sin(phi)} * radius;
        }
        s -= arc;
        if (s <= 2.0 * half_straight) return {half_straight - s, radius};
        s -= 2.0 * half_straight;
        if (s <= arc) {
            const double phi = pi / 2.0 + s / radius;
            return Vec2{-half_straight, 0.0} + Vec2{std::cos(phi), std::sin(phi)} * radius;
        }
        s -= arc;
        return {-half_straight + s, -radius};
    }

    Vec2 tangent(double s) const {
        const double pi = std::numbers::pi;
        const double arc = pi * radius;
        if (s <= half_straight) return {1.0, 0.0};
        s -= half_straight;
        if (s <= arc) {
            const double phi = -pi / 2.0 + s / radius;
            return {-std::sin(phi), std::cos(phi)};
        }
        s -= arc;
        if (s <= 2.0 * half_straight) return {-1.0, 0.0};
        s -= 2.0 * half_straight;
        if (s <= arc) {
            const double phi = pi / 2.0 + s / radius;
            return {-std::sin(phi), std::cos(phi)};
        }
        return {1.0, 0.0};
    }

    /// Arc-length stations covering one full loop, including every
    /// straight/arc junction exactly, at most `max_spacing` apart.
    std::vector<double> stations(double max_spacing) const {
        const double arc = std::numbers::pi * radius;
        std::vector<double> piece_ends = {half_straight, half_straight + arc,
                                          3.0 * half_straight + arc,
                                          3.0 * half_straight + 2.0 * arc, length()};
        std::vector<double> out{0.0};
        double start = 0.0;
        for (const double end : piece_ends) {
            const double span = end - start;
            if (span > 1e-12) {
                const int steps = std::max(1, static_cast<int>(std::ceil(span / max_spacing)));
                for (int k = 1; k <= steps; ++k) out.push_back(start + span * k / steps);
            }
            start = end;
        }
        return out;
    }
};

inline Curve2D stadium_centerline(const Stadium& st, double max_spacing) {
    const std::vector<double> knots = st.stations(max_spacing);
    std::vector<Vec2> points, tangents;
    points.reserve(knots.size());
    tangents.reserve(knots.size());
    for (const double s : knots) {
        points.push_back(st.position(s));
        tangents.push_back(st.tangent(s));
    }
    // Exact seam closure (first == last) despite roundoff in the last piece.
    points.back() = points.front();
    tangents.back() = tangents.front();
    return Curve2D::from_hermite(knots, points, tangents);
}

inline std::vector<Vec2> stadium_polyline(const Stadium& st, double max_spacing) {
    const std::vector<double> knots = st.stations(max_spacing);
    std::vector<Vec2> points;
    points.reserve(knots.size());
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {  // no duplicated seam
        points.push_back(st.position(knots[i]));
    }
    return points;
}

}  // namespace detail

/// World model: per-lane centerlines and boundary polylines of a stadium track.
class TrackModel {
public:
    /// Lanes are 1-based; lane-k centerline radius = inner_radius + (k-1)*lane_width.
    /// `points_per_arc` controls centerline sampling density per semicircle.
    static TrackModel generate(const TrackLayout& layout, int points_per_arc = 64) {
        layout.validate();
        if (points_per_arc < 4) {
            throw std::invalid_argument("TrackModel: points_per_arc must be >= 4");
        }
        TrackModel track;
        track.layout_ = layout;
        const double boundary_spacing = 0.5;
        for (int k = 1; k <= layout.num_lanes; ++k) {
            const double r = layout.inner_radius + (k - 1) * layout.lane_width;
            const detail::Stadium center{layout.straight_length / 2.0, r};
            const detail::Stadium left{layout.straight_length / 2.0,
                                       r - layout.lane_width / 2.0};
            const detail::Stadium right{layout.straight_length / 2.0,
                                        r + layout.lane_width / 2.0};
            const double spacing = std::numbers::pi * r / points_per_arc;
            track.lanes_.push_back(LaneGeometry{
                detail::stadium_centerline(center, spacing),
                detail::stadium_polyline(left, boundary_spacing),
                detail::stadium_polyline(right, boundary_spacing)});
        }
        return track;
    }

    const TrackLayout& layout() const { return layout_; }
    int num_lanes() const { return layout_.num_lanes; }

    const LaneGeometry& lane(int k) const {
        if (k < 1 || k > layout_.num_lanes) {
            throw std::invalid_argument("TrackModel: lane index out of range");
        }
        return lanes_[static_cast<std::size_t>(k - 1)];
    }

    /// Signed lateral offset of q relative to the lane-1 centerline
    /// (positive = inward/left of travel). Lane bands stack outward at -d.
    double lateral_from_inner(const Vec2& q) const {
        return lanes_.front().centerline.project_clamped(q).d;
    }

    /// Lane containing q, or nullopt when q is outside every lane. A point on
    /// the shared boundary of two lanes belongs to the inner one.
    std::optional<int> lane_at(const Vec2& q) const {
        double d;
        try {
            d = lateral_from_inner(q);
        } catch (const AmbiguousProjectionError&) {
            return std::nullopt;  // deep infield / far outside
        }
        const double half = layout_.lane_width / 2.0;
        for (int k = 1; k <= layout_.num_lanes; ++k) {
            if (std::abs(d + (k - 1) * layout_.lane_width) <= half + 1e-9) return k;
        }
        return std::nullopt;
    }

private:
    TrackLayout layout_;
    std::vector<LaneGeometry> lanes_;
};

}  // namespace trackguide

#endif  // TRACKGUIDE_TRACK_HPP
