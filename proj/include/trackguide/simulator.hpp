#ifndef TRACKGUIDE_SIMULATOR_HPP
#define TRACKGUIDE_SIMULATOR_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "trackguide/curve.hpp"
#include "trackguide/errors.hpp"
#include "trackguide/geometry.hpp"
#include "trackguide/guidance.hpp"
#include "trackguide/perception.hpp"
#include "trackguide/planner.hpp"
#include "trackguide/track.hpp"

namespace trackguide {

/// Runner pose and motion state. Speed is a scenario constant; commands only
/// steer (and Stop suppresses motion for the step).
struct RunnerState {
    Vec2 position{};
    double heading = 0.0;  // rad, (-pi, pi]
    double speed = 1.34;   // m/s
    int current_lane = 1;  // last lane the runner was inside
};

/// Heading rates applied per command while a command is held.
struct TurnRates {
    double slight = deg2rad(15.0);  // rad/s, Left/RightForward
    double hard = deg2rad(45.0);    // rad/s, TurnLeft/TurnRight

    void validate() const {
        if (!(slight > 0.0 && hard > slight)) {
            throw std::invalid_argument("TurnRates: need 0 < slight < hard");
        }
    }
};

enum class ScenarioKind { Safe, Detour, Switch };

/// Full description of one simulated episode.
struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::Safe;
    TrackLayout track{};
    int start_lane = 1;
    double start_arc = 0.0;       // m along the start lane centerline
    double goal_distance = 400.0;  // m of arc progress to cover
    double speed = 1.34;           // m/s
    double planning_rate = 10.0;   // Hz
    std::uint64_t seed = 1;
    std::vector<Obstacle> obstacles;
    SensorConfig sensor{};
    LatticeConfig lattice{};
    CostParams cost{};
    SectorConfig sectors{};
    TurnRates turn_rates{};
    double yaw_lookahead = 2.0;  // m along the fitted path

    void validate() const {
        track.validate();
        if (start_lane < 1 || start_lane > track.num_lanes) {
            throw std::invalid_argument("ScenarioSpec: start_lane out of range");
        }
        if (!(goal_distance > 0.0)) {
            throw std::invalid_argument("ScenarioSpec: goal_distance must be > 0");
        }
        if (!(speed > 0.0)) {
            throw std::invalid_argument("ScenarioSpec: speed must be > 0");
        }
        if (!(planning_rate > 0.0)) {
            throw std::invalid_argument("ScenarioSpec: planning_rate must be > 0");
        }
        if (!(yaw_lookahead > 0.0)) {
            throw std::invalid_argument("ScenarioSpec: yaw_lookahead must be > 0");
        }
        for (const Obstacle& ob : obstacles) {
            if (!(ob.radius > 0.0)) {
                throw std::invalid_argument("ScenarioSpec: obstacle radius must be > 0");
            }
        }
        sensor.validate();
        lattice.validate();
        cost.validate();
        sectors.validate();
        turn_rates.validate();
    }
};

/// Advance the runner by one step: rotate per command, then translate along
/// the new heading. Stop zeroes motion for the step. When a track is given,
/// current_lane is refreshed via lane_at (unchanged while outside all lanes).
inline RunnerState step_runner(const RunnerState& state, DirectionCommand command,
                               double dt, const TurnRates& rates,
                               const TrackModel* track = nullptr) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_runner: dt must be > 0");
    RunnerState next = state;
    double rate = 0.0;
    bool moving = true;
    switch (command) {
        case DirectionCommand::Forward: break;
        case DirectionCommand::LeftForward: rate = rates.slight; break;
        case DirectionCommand::RightForward: rate = -rates.slight; break;
        case DirectionCommand::TurnLeft: rate = rates.hard; break;
        case DirectionCommand::TurnRight: rate = -rates.hard; break;
        case DirectionCommand::Stop: moving = false; break;
    }
    next.heading = wrap_angle(state.heading + rate * dt);
    if (moving) {
        next.position =
            state.position + Vec2{std::cos(next.heading), std::sin(next.heading)} *
                                 (state.speed * dt);
    }
    if (track != nullptr) {
        if (const auto lane = track->lane_at(next.position)) next.current_lane = *lane;
    }
    return next;
}

/// Result of one planning frame: the observation actually used, the filled
/// lattice (values and successors), the plan if one exists, and the command.
struct FrameDecision {
    Observation observation;
    Lattice lattice;
    std::optional<PlanResult> plan;
    DirectionCommand command = DirectionCommand::Stop;
    bool degraded = false;  // perception shortfall; previous command reused
    bool widened = false;   // corridor includes an adjacent lane
    LaneBand band{};
};

namespace detail {

/// splitmix64-style combiner for deriving per-frame rng seeds.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9E3779B97F4A7C15ULL * (b + 1ULL);
    z ^= z >> 30; z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27; z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

}  // namespace detail

/// Run the per-frame guidance pipeline: observe the current lane's corridor,
/// build the local reference and lattice, and plan. When every path in the
/// current lane is blocked (or its corridor is infeasible), the corridor is
/// widened to include an adjacent lane — outward first — realizing the lane
/// switch behavior; if no band yields a feasible plan the command is Stop.
/// Perception shortfalls in the current lane degrade to the previous command.
inline FrameDecision plan_one_frame(const TrackModel& track,
                                    const std::vector<Obstacle>& world_obstacles,
                                    const Pose2& pose, int current_lane,
                                    const ScenarioSpec& spec, std::uint64_t frame_seed,
                                    DirectionCommand previous_command,
                                    double timestamp = 0.0) {
    std::vector<LaneBand> bands{{current_lane, current_lane}};
    if (current_lane + 1 <= track.num_lanes()) {
        bands.push_back({current_lane, current_lane + 1});
    }
    if (current_lane - 1 >= 1) {
        bands.push_back({current_lane - 1, current_lane});
    }

    FrameDecision decision;
    for (std::size_t i = 0; i < bands.size(); ++i) {
        const bool primary = (i == 0);
        Observation obs = observe(track, world_obstacles, pose, bands[i], spec.sensor,
                                  detail::mix_seed(frame_seed, i), timestamp);
        LocalReference ref;
        try {
            ref = reference_from_observation(obs);
        } catch (const InsufficientPerceptionError&) {
            if (primary) {
                decision.observation = std::move(obs);
                decision.command = previous_command;
                decision.degraded = true;
                decision.band = bands[i];
                return decision;
            }
            continue;
        }

        const FrenetPoint start = ref.midline.project_clamped({0.0, 0.0});
        Lattice lattice;
        try {
            lattice = build_lattice(ref, spec.lattice, start.s);
        } catch (const InfeasibleCorridorError&) {
            continue;
        }
        if (lattice.empty()) {
            if (primary) {
                decision.observation = std::move(obs);
                decision.command = previous_command;
                decision.degraded = true;
                decision.band = bands[i];
                return decision;
            }
            continue;
        }

        try {
            PlanResult plan_result =
                plan({0.0, 0.0}, lattice, obs.obstacles, spec.cost, spec.yaw_lookahead);
            decision.observation = std::move(obs);
            decision.lattice = std::move(lattice);
            decision.command = command_from_yaw(plan_result.command_yaw, spec.sectors);
            decision.plan = std::move(plan_result);
            decision.widened = !primary;
            decision.band = bands[i];
            return decision;
        } catch (const NoFeasiblePathError&) {
            if (primary) {
                decision.observation = obs;  // keep for the trace if all bands fail
                decision.lattice = lattice;
                decision.band = bands[i];
            }
            continue;
        }
    }
    decision.command = DirectionCommand::Stop;
    return decision;
}

enum class EpisodeStatus { Completed, Collided, Stopped, Timeout };

/// Per-frame record: the runner state the command was computed at, plus
/// safety bookkeeping. `lane` is 0 while outside every lane. `command_yaw`
/// is NaN on frames without a plan; `min_clearance` is +inf with no obstacles.
struct FrameRecord {
    double t = 0.0;
    Vec2 position{};
    double heading = 0.0;
    int lane = 0;
    DirectionCommand command = DirectionCommand::Forward;
    double command_yaw = std::numeric_limits<double>::quiet_NaN();
    double min_clearance = std::numeric_limits<double>::infinity();
    bool degraded = false;
    bool widened = false;
};

struct EpisodeTrace {
    std::vector<FrameRecord> frames;
    EpisodeStatus status = EpisodeStatus::Timeout;
    double dt = 0.1;
};

/// Aggregate episode metrics. Distance is arc progress along the start-lane
/// centerline; average speed is exactly distance / elapsed.
struct Metrics {
    double distance = 0.0;       // m
    double elapsed = 0.0;        // s
    double average_speed = 0.0;  // m/s
    double min_clearance = std::numeric_limits<double>::infinity();  // m
    int lane_departures = 0;
    int boundary_violations = 0;
    int final_lane = 0;
    int degraded_frames = 0;
};

inline Metrics compute_metrics(const EpisodeTrace& trace, const ScenarioSpec& spec) {
    if (trace.frames.empty()) {
        throw std::invalid_argument("compute_metrics: empty trace");
    }
    const TrackModel track = TrackModel::generate(spec.track);
    const Curve2D& reference = track.lane(spec.start_lane).centerline;
    const double loop = reference.total_length();

    Metrics m;
    m.elapsed = static_cast<double>(trace.frames.size()) * trace.dt;
    double prev_s = 0.0;
    int prev_lane = 0;
    bool have_prev = false;
    for (const FrameRecord& f : trace.frames) {
        double s = prev_s;
        try {
            s = reference.project_clamped(f.position).s;
        } catch (const AmbiguousProjectionError&) {
            // far off-track; hold the previous station
        }
        if (have_prev) m.distance += wrap_diff(s, prev_s, loop);
        prev_s = s;
        have_prev = true;

        m.min_clearance = std::min(m.min_clearance, f.min_clearance);
        if (f.lane == 0) {
            ++m.boundary_violations;
        } else {
            if (prev_lane != 0 && f.lane != prev_lane) ++m.lane_departures;
            prev_lane = f.lane;
            m.final_lane = f.lane;
        }
        if (f.degraded) ++m.degraded_frames;
    }
    m.average_speed = m.elapsed > 0.0 ? m.distance / m.elapsed : 0.0;
    return m;
}

/// Invoked once per frame with the frame's full planning decision; used for
/// observation and plan dumps.
using FrameCallback = std::function<void(const FrameDecision&, const FrameRecord&)>;

/// Closed-loop episode: at each frame observe, plan, discretize the planned
/// yaw into a command, and advance the runner. Terminates on goal progress
/// (completed), contact with an obstacle (collided), a Stop command held
/// longer than 5 s (stopped), or a simulated-time budget of 3x the ideal
/// time (timeout). Perception or planning failures within a frame degrade to
/// the previous command and are counted; they never abort the episode.
inline std::pair<EpisodeTrace, Metrics> run_episode(const ScenarioSpec& spec,
                                                    const FrameCallback& on_frame = {}) {
    spec.validate();
    const TrackModel track = TrackModel::generate(spec.track);
    const Curve2D& start_centerline = track.lane(spec.start_lane).centerline;
    const double loop = start_centerline.total_length();

    RunnerState state;
    state.position = start_centerline.position_at(spec.start_arc);
    state.heading = start_centerline.yaw_at(spec.start_arc);
    state.speed = spec.speed;
    state.current_lane = spec.start_lane;

    const double dt = 1.0 / spec.planning_rate;
    const double ideal_time = spec.goal_distance / spec.speed;
    const long max_frames = static_cast<long>(std::ceil(3.0 * ideal_time / dt));

    EpisodeTrace trace;
    trace.dt = dt;
    trace.status = EpisodeStatus::Timeout;

    auto clearance_at = [&](const Vec2& p) {
        double c = std::numeric_limits<double>::infinity();
        for (const Obstacle& ob : spec.obstacles) {
            c = std::min(c, distance(p, ob.position) - ob.radius);
        }
        return c;
    };

    double progress = 0.0;
    double prev_s = spec.start_arc;
    double stop_held = 0.0;
    DirectionCommand previous_command = DirectionCommand::Forward;

    for (long f = 0; f < max_frames; ++f) {
        const double t = static_cast<double>(f) * dt;
        const FrameDecision decision = plan_one_frame(
            track, spec.obstacles, {state.position, state.heading}, state.current_lane,
            spec, detail::mix_seed(spec.seed, static_cast<std::uint64_t>(f)),
            previous_command, t);

        FrameRecord rec;
        rec.t = t;
        rec.position = state.position;
        rec.heading = state.heading;
        rec.lane = track.lane_at(state.position).value_or(0);
        rec.command = decision.command;
        if (decision.plan) rec.command_yaw = decision.plan->command_yaw;
        rec.min_clearance = clearance_at(state.position);
        rec.degraded = decision.degraded;
        rec.widened = decision.widened;
        trace.frames.push_back(rec);
        if (on_frame) on_frame(decision, rec);
        previous_command = decision.command;

        stop_held = (decision.command == DirectionCommand::Stop) ? stop_held + dt : 0.0;

        state = step_runner(state, decision.command, dt, spec.turn_rates, &track);

        double s_now = prev_s;
        try {
            s_now = start_centerline.project_clamped(state.position).s;
        } catch (const AmbiguousProjectionError&) {
        }
        progress += wrap_diff(s_now, prev_s, loop);
        prev_s = s_now;

        if (clearance_at(state.position) < 0.0) {
            trace.status = EpisodeStatus::Collided;
            break;
        }
        if (progress >= spec.goal_distance) {
            trace.status = EpisodeStatus::Completed;
            break;
        }
        if (stop_held > 5.0) {
            trace.status = EpisodeStatus::Stopped;
            break;
        }
    }
    return {trace, compute_metrics(trace, spec)};
}

}  // namespace trackguide

#endif  // TRACKGUIDE_SIMULATOR_HPP
