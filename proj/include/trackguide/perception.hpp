#ifndef TRACKGUIDE_PERCEPTION_HPP
#define TRACKGUIDE_PERCEPTION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "trackguide/corridor.hpp"
#include "trackguide/curve.hpp"
#include "trackguide/errors.hpp"
#include "trackguide/geometry.hpp"
#include "trackguide/track.hpp"

namespace trackguide {

/// Synthetic forward-looking range sensor standing in for an RGB-D front-end.
struct SensorConfig {
    double horizontal_fov = deg2rad(69.0);  // rad, full angle
    double max_range = 10.0;                // m
    double lateral_noise_sigma = 0.03;      // m, on body-frame y of boundary points
    double obstacle_dropout_prob = 0.0;     // [0, 1]
    bool occlusion_enabled = false;

    void validate() const {
        if (!(horizontal_fov > 0.0 && horizontal_fov < std::numbers::pi)) {
            throw std::invalid_argument("SensorConfig: fov must be in (0, pi)");
        }
        if (!(max_range > 0.0)) {
            throw std::invalid_argument("SensorConfig: max_range must be > 0");
        }
        if (!(lateral_noise_sigma >= 0.0)) {
            throw std::invalid_argument("SensorConfig: noise sigma must be >= 0");
        }
        if (!(obstacle_dropout_prob >= 0.0 && obstacle_dropout_prob <= 1.0)) {
            throw std::invalid_argument("SensorConfig: dropout must be in [0, 1]");
        }
    }
};

/// Static circular obstacle in world coordinates.
struct Obstacle {
    Vec2 position{};
    double radius = 0.3;  // m, footprint
};

/// Obstacle detection in the observer's body frame.
struct ObstacleDetection {
    Vec2 position{};  // body frame
    double radius = 0.3;
};

/// One perception frame: corridor boundary polylines and obstacle detections,
/// all in the body frame (x forward, y left), clipped to the sensor's field
/// of view and range.
struct Observation {
    std::vector<Vec2> left_boundary;
    std::vector<Vec2> right_boundary;
    std::vector<ObstacleDetection> obstacles;
    double timestamp = 0.0;  // s
};

/// Contiguous band of lanes [inner, outer] whose outline forms the corridor.
struct LaneBand {
    int inner = 1;
    int outer = 1;
};

namespace detail {

inline bool in_fov(const Vec2& body, const SensorConfig& sensor) {
    const double range = body.norm();
    if (range > sensor.max_range) return false;
    return std::abs(std::atan2(body.y, body.x)) <= sensor.horizontal_fov / 2.0;
}

/// Visible slice of a cyclic boundary polyline, in travel order, transformed
/// to the body frame with lateral noise applied.
inline std::vector<Vec2> clip_boundary(const std::vector<Vec2>& polyline,
                                       const Pose2& pose, const SensorConfig& sensor,
                                       std::mt19937_64& rng) {
    const std::size_t n = polyline.size();
    if (n == 0) return {};
    std::size_t nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double d2 = (polyline[i] - pose.position).squared_norm();
        if (d2 < best) { best = d2; nearest = i; }
    }
    // Walk a window around the nearest point so that a slice straddling the
    // polyline seam stays in travel order.
    double spacing = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) spacing += distance(polyline[i], polyline[i + 1]);
    spacing /= static_cast<double>(n - 1);
    const std::size_t reach = std::min<std::size_t>(
        n / 2, static_cast<std::size_t>((sensor.max_range + 2.0) / std::max(spacing, 1e-6)) + 2);

    std::normal_distribution<double> noise(0.0, sensor.lateral_noise_sigma);
    std::vector<Vec2> out;
    for (std::size_t k = 0; k <= 2 * reach; ++k) {
        const std::size_t i = (nearest + n - reach + k) % n;
        const Vec2& w = polyline[i];
        if (distance(w, pose.position) > sensor.max_range + 1.0) continue;  // skip draws far out
        Vec2 body = pose.to_body(w);
        if (sensor.lateral_noise_sigma > 0.0) body.y += noise(rng);
        if (in_fov(body, sensor)) out.push_back(body);
    }
    return out;
}

}  // namespace detail

/// Simulate one perception frame for a runner at `pose` whose planning
/// corridor spans `band`. The corridor's left boundary is the innermost
/// lane's left line and its right boundary the outermost lane's right line.
/// Boundary points receive zero-mean Gaussian lateral noise; each obstacle in
/// view is independently dropped with the configured probability; with
/// occlusion enabled, boundary points hidden behind a nearer obstacle are
/// removed. Deterministic for identical inputs and seed.
inline Observation observe(const TrackModel& track, const std::vector<Obstacle>& obstacles,
                           const Pose2& pose, const LaneBand& band,
                           const SensorConfig& sensor, std::uint64_t seed,
                           double timestamp = 0.0) {
    sensor.validate();
    if (band.inner < 1 || band.outer > track.num_lanes() || band.inner > band.outer) {
        throw std::invalid_argument("observe: invalid lane band");
    }
    std::mt19937_64 rng(seed);
    Observation obs;
    obs.timestamp = timestamp;
    obs.left_boundary =
        detail::clip_boundary(track.lane(band.inner).left_boundary, pose, sensor, rng);
    obs.right_boundary =
        detail::clip_boundary(track.lane(band.outer).right_boundary, pose, sensor, rng);

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<ObstacleDetection> in_view;  // pre-dropout, also the occluder set
    for (const Obstacle& ob : obstacles) {
        const Vec2 body = pose.to_body(ob.position);
        if (!detail::in_fov(body, sensor)) continue;
        in_view.push_back({body, ob.radius});
        const double roll = unit(rng);
        if (roll < sensor.obstacle_dropout_prob) continue;
        obs.obstacles.push_back({body, ob.radius});
    }

    if (sensor.occlusion_enabled && !in_view.empty()) {
        // Drop boundary points whose sight ray passes within an obstacle
        // radius of a nearer obstacle. Dropout does not un-occlude.
        auto visible = [&](const Vec2& p) {
            const double range = p.norm();
            for (const ObstacleDetection& b : in_view) {
                if (b.position.norm() >= range) continue;
                if (point_segment_distance(b.position, {0.0, 0.0}, p) < b.radius) return false;
            }
            return true;
        };
        std::erase_if(obs.left_boundary, [&](const Vec2& p) { return !visible(p); });
        std::erase_if(obs.right_boundary, [&](const Vec2& p) { return !visible(p); });
    }
    return obs;
}

/// Build the local planning reference from an observation: the pointwise
/// midline of the two boundary polylines, resampled at common normalized
/// arc stations, plus the corridor half-width profile along it.
/// Throws InsufficientPerceptionError when either boundary has < 2 points.
inline LocalReference reference_from_observation(const Observation& obs) {
    if (obs.left_boundary.size() < 2 || obs.right_boundary.size() < 2) {
        throw InsufficientPerceptionError(
            "reference_from_observation: a boundary has fewer than 2 visible points");
    }

    auto cumulative = [](const std::vector<Vec2>& pts) {
        std::vector<double> u(pts.size(), 0.0);
        for (std::size_t i = 1; i < pts.size(); ++i) {
            u[i] = u[i - 1] + distance(pts[i - 1], pts[i]);
        }
        return u;
    };
    const std::vector<double> ul = cumulative(obs.left_boundary);
    const std::vector<double> ur = cumulative(obs.right_boundary);
    if (ul.back() <= 0.0 || ur.back() <= 0.0) {
        throw InsufficientPerceptionError("reference_from_observation: degenerate boundary");
    }

    auto sample = [](const std::vector<Vec2>& pts, const std::vector<double>& u, double frac) {
        const double target = frac * u.back();
        const auto it = std::upper_bound(u.begin(), u.end(), target);
        std::size_t i = static_cast<std::size_t>(it - u.begin());
        if (i == 0) return pts.front();
        if (i >= pts.size()) return pts.back();
        const double span = u[i] - u[i - 1];
        const double w = span > 0.0 ? (target - u[i - 1]) / span : 0.0;
        return pts[i - 1] + (pts[i] - pts[i - 1]) * w;
    };

    const double longer = std::max(ul.back(), ur.back());
    const std::size_t stations = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::ceil(longer / 0.5)) + 1, 2, 200);

    std::vector<Vec2> mid;
    std::vector<double> half_width;
    for (std::size_t j = 0; j < stations; ++j) {
        const double frac = static_cast<double>(j) / static_cast<double>(stations - 1);
        const Vec2 l = sample(obs.left_boundary, ul, frac);
        const Vec2 r = sample(obs.right_boundary, ur, frac);
        const Vec2 m = (l + r) / 2.0;
        if (!mid.empty() && distance(mid.back(), m) < 1e-6) continue;
        mid.push_back(m);
        half_width.push_back(distance(l, r) / 2.0);
    }
    if (mid.size() < 2) {
        throw InsufficientPerceptionError("reference_from_observation: midline collapsed");
    }

    LocalReference ref{Curve2D::fit(mid), CorridorProfile{}};
    ref.corridor.station_s = ref.midline.knot_arc_lengths();
    ref.corridor.half_width = half_width;
    return ref;
}

}  // namespace trackguide

#endif  // TRACKGUIDE_PERCEPTION_HPP
