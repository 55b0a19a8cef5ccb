#include "trackguide/perception.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "trackguide/errors.hpp"
#include "trackguide/geometry.hpp"
#include "trackguide/track.hpp"

using namespace trackguide;

namespace {

constexpr double kPi = std::numbers::pi;

struct Fixture {
    TrackLayout layout{};
    TrackModel track = TrackModel::generate(layout);
    Pose2 pose;  // mid-straight, heading along the lane
    SensorConfig sensor;

    Fixture() {
        const Curve2D& c = track.lane(1).centerline;
        pose = {c.position_at(5.0), c.yaw_at(5.0)};
        sensor.lateral_noise_sigma = 0.0;
        sensor.obstacle_dropout_prob = 0.0;
        sensor.occlusion_enabled = false;
    }
};

Observation parallel_corridor(double y_left, double y_right, int count = 10) {
    Observation obs;
    for (int i = 0; i < count; ++i) {
        obs.left_boundary.push_back({1.0 + i, y_left});
        obs.right_boundary.push_back({1.0 + i, y_right});
    }
    return obs;
}

}  // namespace

TEST(Observe, ObstacleDeadAheadAppearsAtExactBodyCoordinates) {
    Fixture f;
    const Obstacle ob{f.pose.to_world({5.0, 0.0}), 0.3};
    const Observation obs = observe(f.track, {ob}, f.pose, {1, 1}, f.sensor, 42);
    ASSERT_EQ(obs.obstacles.size(), 1u);
    EXPECT_NEAR(obs.obstacles[0].position.x, 5.0, 1e-9);
    EXPECT_NEAR(obs.obstacles[0].position.y, 0.0, 1e-9);
    EXPECT_NEAR(obs.obstacles[0].radius, 0.3, 1e-12);
}

TEST(Observe, ObstacleBehindIsInvisible) {
    Fixture f;
    const Obstacle behind{f.pose.to_world({-5.0, 0.0}), 0.3};
    const Observation obs = observe(f.track, {behind}, f.pose, {1, 1}, f.sensor, 42);
    EXPECT_TRUE(obs.obstacles.empty());
}

TEST(Observe, ObstacleBeyondRangeIsInvisible) {
    Fixture f;
    const Obstacle far{f.pose.to_world({12.0, 0.0}), 0.3};
    const Observation obs = observe(f.track, {far}, f.pose, {1, 1}, f.sensor, 42);
    EXPECT_TRUE(obs.obstacles.empty());
}

TEST(Observe, DeterministicForIdenticalSeed) {
    Fixture f;
    f.sensor.lateral_noise_sigma = 0.05;
    const Obstacle ob{f.pose.to_world({6.0, 0.2}), 0.3};
    const Observation a = observe(f.track, {ob}, f.pose, {1, 1}, f.sensor, 7);
    const Observation b = observe(f.track, {ob}, f.pose, {1, 1}, f.sensor, 7);
    ASSERT_EQ(a.left_boundary.size(), b.left_boundary.size());
    for (std::size_t i = 0; i < a.left_boundary.size(); ++i) {
        EXPECT_EQ(a.left_boundary[i].x, b.left_boundary[i].x);
        EXPECT_EQ(a.left_boundary[i].y, b.left_boundary[i].y);
    }
    const Observation c = observe(f.track, {ob}, f.pose, {1, 1}, f.sensor, 8);
    bool any_differs = a.left_boundary.size() != c.left_boundary.size();
    for (std::size_t i = 0; !any_differs && i < a.left_boundary.size(); ++i) {
        any_differs = a.left_boundary[i].y != c.left_boundary[i].y;
    }
    EXPECT_TRUE(any_differs);
}

TEST(Observe, NoiseFreePointsLieOnTrueBoundaries) {
    Fixture f;
    const Observation obs = observe(f.track, {}, f.pose, {1, 1}, f.sensor, 0);
    ASSERT_GE(obs.left_boundary.size(), 2u);
    ASSERT_GE(obs.right_boundary.size(), 2u);
    auto nearest_to = [](const std::vector<Vec2>& pts, const Vec2& q) {
        double best = std::numeric_limits<double>::infinity();
        for (const Vec2& p : pts) best = std::min(best, distance(p, q));
        return best;
    };
    for (const Vec2& body : obs.left_boundary) {
        EXPECT_LT(nearest_to(f.track.lane(1).left_boundary, f.pose.to_world(body)), 1e-9);
    }
    for (const Vec2& body : obs.right_boundary) {
        EXPECT_LT(nearest_to(f.track.lane(1).right_boundary, f.pose.to_world(body)), 1e-9);
    }
}

TEST(Observe, FovSoundnessHoldsEvenWithNoise) {
    Fixture f;
    f.sensor.lateral_noise_sigma = 0.08;
    const Observation obs = observe(f.track, {}, f.pose, {1, 2}, f.sensor, 99);
    auto check = [&](const std::vector<Vec2>& pts) {
        for (const Vec2& p : pts) {
            EXPECT_LE(p.norm(), f.sensor.max_range + 1e-12);
            EXPECT_LE(std::abs(std::atan2(p.y, p.x)), f.sensor.horizontal_fov / 2.0 + 1e-12);
        }
    };
    check(obs.left_boundary);
    check(obs.right_boundary);
}

TEST(Observe, DropoutRemovesObstacles) {
    Fixture f;
    const Obstacle ob{f.pose.to_world({5.0, 0.0}), 0.3};
    f.sensor.obstacle_dropout_prob = 1.0;
    EXPECT_TRUE(observe(f.track, {ob}, f.pose, {1, 1}, f.sensor, 3).obstacles.empty());
    f.sensor.obstacle_dropout_prob = 0.0;
    EXPECT_EQ(observe(f.track, {ob}, f.pose, {1, 1}, f.sensor, 3).obstacles.size(), 1u);
}

TEST(Observe, OcclusionHidesBoundaryPointsBehindObstacles) {
    Fixture f;
    const Obstacle ob{f.pose.to_world({4.0, 0.0}), 0.35};
    f.sensor.occlusion_enabled = false;
    const Observation open = observe(f.track, {ob}, f.pose, {1, 1}, f.sensor, 5);
    f.sensor.occlusion_enabled = true;
    const Observation shadowed = observe(f.track, {ob}, f.pose, {1, 1}, f.sensor, 5);

    EXPECT_LT(shadowed.left_boundary.size() + shadowed.right_boundary.size(),
              open.left_boundary.size() + open.right_boundary.size());
    // Surviving points are never inside an occluded sight ray.
    for (const Vec2& p : shadowed.left_boundary) {
        if (p.norm() > 4.0) {
            EXPECT_GE(point_segment_distance({4.0, 0.0}, {0.0, 0.0}, p), 0.35 - 1e-9);
        }
    }
    // The obstacle itself is still detected.
    EXPECT_EQ(shadowed.obstacles.size(), 1u);
}

TEST(Observe, SliceStraddlingThePolylineSeamStaysOrdered) {
    Fixture f;
    const Curve2D& c = f.track.lane(1).centerline;
    const double L = c.total_length();
    const Pose2 near_seam{c.position_at(L - 3.0), c.yaw_at(L - 3.0)};
    const Observation obs = observe(f.track, {}, near_seam, {1, 1}, f.sensor, 0);
    ASSERT_GE(obs.left_boundary.size(), 4u);
    // Forward-ordered means body-frame x increases overall.
    EXPECT_LT(obs.left_boundary.front().x, obs.left_boundary.back().x);
    for (std::size_t i = 0; i + 1 < obs.left_boundary.size(); ++i) {
        EXPECT_LT(obs.left_boundary[i].x, obs.left_boundary[i + 1].x + 0.25);
    }
}

TEST(ReferenceFromObservation, SymmetricCorridorMidline) {
    const Observation obs = parallel_corridor(0.61, -0.61);
    const LocalReference ref = reference_from_observation(obs);
    for (double s = 0.0; s <= ref.midline.total_length(); s += 1.0) {
        EXPECT_NEAR(ref.midline.position_at(s).y, 0.0, 1e-9);
        EXPECT_NEAR(ref.corridor.at(s), 0.61, 1e-9);
    }
}

TEST(ReferenceFromObservation, OffsetCorridorMidline) {
    const Observation obs = parallel_corridor(1.22, 0.0);
    const LocalReference ref = reference_from_observation(obs);
    for (double s = 0.0; s <= ref.midline.total_length(); s += 1.0) {
        EXPECT_NEAR(ref.midline.position_at(s).y, 0.61, 1e-9);
        EXPECT_NEAR(ref.corridor.at(s), 0.61, 1e-9);
    }
}

TEST(ReferenceFromObservation, ConcentricArcsMidlineRadius) {
    Observation obs;
    const Vec2 center{0.0, 40.0};
    const double inner = 36.19, outer = 37.41;  // concentric lane boundaries
    for (int i = 0; i <= 24; ++i) {
        const double a = -kPi / 2.0 + 0.25 * i / 24.0;  // ~9 m of arc
        obs.left_boundary.push_back(center + Vec2{std::cos(a), std::sin(a)} * inner);
        obs.right_boundary.push_back(center + Vec2{std::cos(a), std::sin(a)} * outer);
    }
    const LocalReference ref = reference_from_observation(obs);
    for (double s = 0.5; s < ref.midline.total_length(); s += 1.0) {
        EXPECT_NEAR(distance(ref.midline.position_at(s), center), 36.80, 0.02);
        EXPECT_NEAR(ref.corridor.at(s), 0.61, 0.02);
    }
}

TEST(ReferenceFromObservation, InsufficientBoundaryPoints) {
    Observation obs;
    obs.left_boundary = {{1.0, 0.61}};
    obs.right_boundary = {{1.0, -0.61}, {2.0, -0.61}};
    EXPECT_THROW(reference_from_observation(obs), InsufficientPerceptionError);
}

TEST(ReferenceFromObservation, MidlineTracksLaneCenterline) {
    Fixture f;
    const Observation obs = observe(f.track, {}, f.pose, {1, 1}, f.sensor, 0);
    const LocalReference ref = reference_from_observation(obs);
    const Curve2D& lane_center = f.track.lane(1).centerline;
    for (double s = 0.0; s <= ref.midline.total_length(); s += 1.0) {
        const Vec2 world = f.pose.to_world(ref.midline.position_at(s));
        const FrenetPoint p = lane_center.project_clamped(world);
        EXPECT_LE(std::abs(p.d), 0.02) << "station " << s;
    }
}

TEST(Observe, RejectsInvalidInputs) {
    Fixture f;
    SensorConfig bad = f.sensor;
    bad.horizontal_fov = -1.0;
    EXPECT_THROW(observe(f.track, {}, f.pose, {1, 1}, bad, 0), std::invalid_argument);
    EXPECT_THROW(observe(f.track, {}, f.pose, {0, 1}, f.sensor, 0), std::invalid_argument);
    EXPECT_THROW(observe(f.track, {}, f.pose, {2, 1}, f.sensor, 0), std::invalid_argument);
}
