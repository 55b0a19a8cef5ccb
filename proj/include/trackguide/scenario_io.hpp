#ifndef TRACKGUIDE_SCENARIO_IO_HPP
#define TRACKGUIDE_SCENARIO_IO_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "trackguide/geometry.hpp"
#include "trackguide/guidance.hpp"
#include "trackguide/simulator.hpp"

namespace trackguide {

using ordered_json = nlohmann::ordered_json;

namespace io_detail {

/// Strict parsing: any key outside the allow-list is a config error, so typos
/// in sweep configs fail loudly instead of silently using defaults.
inline void check_fields(const nlohmann::json& j, const std::string& context,
                         std::initializer_list<const char*> allowed) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* a : allowed) {
            if (item.key() == a) { known = true; break; }
        }
        if (!known) {
            throw std::invalid_argument("scenario: unknown field '" +
                                        (context.empty() ? item.key() : context + "." + item.key()) +
                                        "'");
        }
    }
}

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw std::invalid_argument(std::string("scenario: field '") + key +
                                    "' has the wrong type");
    }
}

}  // namespace io_detail

inline ScenarioKind scenario_kind_from_string(const std::string& s) {
    if (s == "safe") return ScenarioKind::Safe;
    if (s == "detour") return ScenarioKind::Detour;
    if (s == "switch") return ScenarioKind::Switch;
    throw std::invalid_argument("scenario: field 'kind' must be safe, detour, or switch");
}

inline std::string to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::Safe: return "safe";
        case ScenarioKind::Detour: return "detour";
        case ScenarioKind::Switch: return "switch";
    }
    return "safe";
}

inline std::string to_string(EpisodeStatus status) {
    switch (status) {
        case EpisodeStatus::Completed: return "completed";
        case EpisodeStatus::Collided: return "collided";
        case EpisodeStatus::Stopped: return "stopped";
        case EpisodeStatus::Timeout: return "timeout";
    }
    return "timeout";
}

/// Parse a scenario from JSON. All fields are optional with module defaults;
/// unknown fields are rejected. Obstacles take either world coordinates
/// {x_m, y_m, radius_m} or the track-relative form {lane, s_m, d_m, radius_m},
/// resolved against the scenario's own track.
inline ScenarioSpec scenario_from_json(const nlohmann::json& j) {
    using io_detail::check_fields;
    using io_detail::get_or;

    check_fields(j, "", {"kind", "track", "start_lane", "start_arc_m", "goal_distance_m",
                         "speed_mps", "planning_rate_hz", "seed", "obstacles", "sensor",
                         "lattice", "cost", "sectors", "turn_rates", "lookahead_m"});

    ScenarioSpec spec;
    spec.kind = scenario_kind_from_string(get_or<std::string>(j, "kind", "safe"));

    if (j.contains("track")) {
        const auto& t = j.at("track");
        check_fields(t, "track",
                     {"straight_length_m", "inner_radius_m", "lane_width_m", "num_lanes"});
        spec.track.straight_length = get_or(t, "straight_length_m", spec.track.straight_length);
        spec.track.inner_radius = get_or(t, "inner_radius_m", spec.track.inner_radius);
        spec.track.lane_width = get_or(t, "lane_width_m", spec.track.lane_width);
        spec.track.num_lanes = get_or(t, "num_lanes", spec.track.num_lanes);
    }
    spec.start_lane = get_or(j, "start_lane", spec.start_lane);
    spec.start_arc = get_or(j, "start_arc_m", spec.start_arc);
    spec.goal_distance = get_or(j, "goal_distance_m", spec.goal_distance);
    spec.speed = get_or(j, "speed_mps", spec.speed);
    spec.planning_rate = get_or(j, "planning_rate_hz", spec.planning_rate);
    spec.seed = get_or<std::uint64_t>(j, "seed", spec.seed);
    spec.yaw_lookahead = get_or(j, "lookahead_m", spec.yaw_lookahead);

    if (j.contains("sensor")) {
        const auto& s = j.at("sensor");
        check_fields(s, "sensor", {"fov_deg", "max_range_m", "lateral_noise_sigma_m",
                                   "obstacle_dropout_prob", "occlusion_enabled"});
        spec.sensor.horizontal_fov = deg2rad(get_or(s, "fov_deg", rad2deg(spec.sensor.horizontal_fov)));
        spec.sensor.max_range = get_or(s, "max_range_m", spec.sensor.max_range);
        spec.sensor.lateral_noise_sigma =
            get_or(s, "lateral_noise_sigma_m", spec.sensor.lateral_noise_sigma);
        spec.sensor.obstacle_dropout_prob =
            get_or(s, "obstacle_dropout_prob", spec.sensor.obstacle_dropout_prob);
        spec.sensor.occlusion_enabled = get_or(s, "occlusion_enabled", spec.sensor.occlusion_enabled);
    }
    if (j.contains("lattice")) {
        const auto& l = j.at("lattice");
        check_fields(l, "lattice",
                     {"horizon_m", "row_spacing_m", "lateral_count", "lateral_margin_m"});
        spec.lattice.horizon = get_or(l, "horizon_m", spec.lattice.horizon);
        spec.lattice.row_spacing = get_or(l, "row_spacing_m", spec.lattice.row_spacing);
        spec.lattice.lateral_count = get_or(l, "lateral_count", spec.lattice.lateral_count);
        spec.lattice.lateral_margin = get_or(l, "lateral_margin_m", spec.lattice.lateral_margin);
    }
    if (j.contains("cost")) {
        const auto& c = j.at("cost");
        check_fields(c, "cost", {"k", "d_safe_m", "terminal_weight"});
        spec.cost.k = get_or(c, "k", spec.cost.k);
        spec.cost.d_safe = get_or(c, "d_safe_m", spec.cost.d_safe);
        spec.cost.terminal_weight = get_or(c, "terminal_weight", spec.cost.terminal_weight);
    }
    if (j.contains("sectors")) {
        const auto& s = j.at("sectors");
        check_fields(s, "sectors", {"forward_half_angle_deg", "slight_turn_limit_deg"});
        spec.sectors.forward_half_angle =
            deg2rad(get_or(s, "forward_half_angle_deg", rad2deg(spec.sectors.forward_half_angle)));
        spec.sectors.slight_turn_limit =
            deg2rad(get_or(s, "slight_turn_limit_deg", rad2deg(spec.sectors.slight_turn_limit)));
    }
    if (j.contains("turn_rates")) {
        const auto& r = j.at("turn_rates");
        check_fields(r, "turn_rates", {"slight_dps", "hard_dps"});
        spec.turn_rates.slight = deg2rad(get_or(r, "slight_dps", rad2deg(spec.turn_rates.slight)));
        spec.turn_rates.hard = deg2rad(get_or(r, "hard_dps", rad2deg(spec.turn_rates.hard)));
    }

    if (j.contains("obstacles")) {
        if (!j.at("obstacles").is_array()) {
            throw std::invalid_argument("scenario: field 'obstacles' must be an array");
        }
        // Track-relative obstacles are resolved against the scenario's track.
        const bool any_relative = [&] {
            for (const auto& o : j.at("obstacles")) {
                if (o.contains("lane")) return true;
            }
            return false;
        }();
        TrackModel track;
        if (any_relative) track = TrackModel::generate(spec.track);
        for (const auto& o : j.at("obstacles")) {
            Obstacle ob;
            if (o.contains("lane")) {
                check_fields(o, "obstacles[]", {"lane", "s_m", "d_m", "radius_m"});
                const int lane = get_or(o, "lane", 1);
                const double s = get_or(o, "s_m", 0.0);
                const double d = get_or(o, "d_m", 0.0);
                ob.position = track.lane(lane).centerline.frenet_to_cartesian({s, d});
            } else {
                check_fields(o, "obstacles[]", {"x_m", "y_m", "radius_m"});
                ob.position = {get_or(o, "x_m", 0.0), get_or(o, "y_m", 0.0)};
            }
            ob.radius = get_or(o, "radius_m", 0.3);
            spec.obstacles.push_back(ob);
        }
    }

    spec.validate();
    return spec;
}

inline ScenarioSpec load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("scenario file not found: " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("scenario file " + path + " is not valid JSON: " + e.what());
    }
    return scenario_from_json(j);
}

inline ordered_json scenario_to_json(const ScenarioSpec& spec) {
    ordered_json j;
    j["kind"] = to_string(spec.kind);
    j["track"] = {{"straight_length_m", spec.track.straight_length},
                  {"inner_radius_m", spec.track.inner_radius},
                  {"lane_width_m", spec.track.lane_width},
                  {"num_lanes", spec.track.num_lanes}};
    j["start_lane"] = spec.start_lane;
    j["start_arc_m"] = spec.start_arc;
    j["goal_distance_m"] = spec.goal_distance;
    j["speed_mps"] = spec.speed;
    j["planning_rate_hz"] = spec.planning_rate;
    j["seed"] = spec.seed;
    j["obstacles"] = ordered_json::array();
    for (const Obstacle& ob : spec.obstacles) {
        j["obstacles"].push_back(
            {{"x_m", ob.position.x}, {"y_m", ob.position.y}, {"radius_m", ob.radius}});
    }
    j["sensor"] = {{"fov_deg", rad2deg(spec.sensor.horizontal_fov)},
                   {"max_range_m", spec.sensor.max_range},
                   {"lateral_noise_sigma_m", spec.sensor.lateral_noise_sigma},
                   {"obstacle_dropout_prob", spec.sensor.obstacle_dropout_prob},
                   {"occlusion_enabled", spec.sensor.occlusion_enabled}};
    j["lattice"] = {{"horizon_m", spec.lattice.horizon},
                    {"row_spacing_m", spec.lattice.row_spacing},
                    {"lateral_count", spec.lattice.lateral_count},
                    {"lateral_margin_m", spec.lattice.lateral_margin}};
    j["cost"] = {{"k", spec.cost.k},
                 {"d_safe_m", spec.cost.d_safe},
                 {"terminal_weight", spec.cost.terminal_weight}};
    j["sectors"] = {{"forward_half_angle_deg", rad2deg(spec.sectors.forward_half_angle)},
                    {"slight_turn_limit_deg", rad2deg(spec.sectors.slight_turn_limit)}};
    j["turn_rates"] = {{"slight_dps", rad2deg(spec.turn_rates.slight)},
                       {"hard_dps", rad2deg(spec.turn_rates.hard)}};
    j["lookahead_m"] = spec.yaw_lookahead;
    return j;
}

/// One trace line: {t, x, y, heading, lane, command, yaw, min_clearance}.
/// NaN/inf serialize as null (no obstacles, or no plan that frame).
inline ordered_json frame_to_json(const FrameRecord& f) {
    ordered_json j;
    j["t"] = f.t;
    j["x"] = f.position.x;
    j["y"] = f.position.y;
    j["heading"] = f.heading;
    j["lane"] = f.lane;
    j["command"] = std::string(emit(f.command));
    j["yaw"] = f.command_yaw;
    j["min_clearance"] = f.min_clearance;
    return j;
}

/// JSON-lines serialization of a whole trace (one frame per line).
inline std::string trace_to_jsonl(const EpisodeTrace& trace) {
    std::ostringstream out;
    for (const FrameRecord& f : trace.frames) {
        out << frame_to_json(f).dump() << '\n';
    }
    return out.str();
}

/// Minimal frame view parsed back from a trace line.
struct TraceLine {
    double t = 0.0;
    Vec2 position{};
    double heading = 0.0;
    int lane = 0;
    std::string command;
    double yaw = std::numeric_limits<double>::quiet_NaN();
    double min_clearance = std::numeric_limits<double>::infinity();
};

inline TraceLine parse_trace_line(const std::string& line) {
    const nlohmann::json j = nlohmann::json::parse(line);
    TraceLine f;
    f.t = j.at("t").get<double>();
    f.position = {j.at("x").get<double>(), j.at("y").get<double>()};
    f.heading = j.at("heading").get<double>();
    f.lane = j.at("lane").get<int>();
    f.command = j.at("command").get<std::string>();
    if (j.contains("yaw") && j.at("yaw").is_number()) f.yaw = j.at("yaw").get<double>();
    if (j.at("min_clearance").is_number()) {
        f.min_clearance = j.at("min_clearance").get<double>();
    }
    return f;
}

inline std::vector<TraceLine> parse_trace_jsonl(std::istream& in) {
    std::vector<TraceLine> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) out.push_back(parse_trace_line(line));
    }
    return out;
}

inline ordered_json metrics_to_json(const Metrics& m, EpisodeStatus status) {
    ordered_json j;
    j["status"] = to_string(status);
    j["distance_m"] = m.distance;
    j["elapsed_s"] = m.elapsed;
    j["average_speed_mps"] = m.average_speed;
    j["min_clearance_m"] = m.min_clearance;
    j["lane_departures"] = m.lane_departures;
    j["boundary_violations"] = m.boundary_violations;
    j["final_lane"] = m.final_lane;
    j["degraded_frames"] = m.degraded_frames;
    return j;
}

inline ordered_json observation_to_json(const Observation& obs) {
    ordered_json j;
    j["t"] = obs.timestamp;
    auto polyline = [](const std::vector<Vec2>& pts) {
        ordered_json arr = ordered_json::array();
        for (const Vec2& p : pts) arr.push_back({{"x", p.x}, {"y", p.y}});
        return arr;
    };
    j["left_boundary"] = polyline(obs.left_boundary);
    j["right_boundary"] = polyline(obs.right_boundary);
    j["obstacles"] = ordered_json::array();
    for (const ObstacleDetection& ob : obs.obstacles) {
        j["obstacles"].push_back(
            {{"x", ob.position.x}, {"y", ob.position.y}, {"radius", ob.radius}});
    }
    return j;
}

inline ordered_json plan_to_json(const Lattice& lattice, const PlanResult* plan,
                                 double timestamp) {
    ordered_json j;
    j["t"] = timestamp;
    j["lattice"] = ordered_json::array();
    for (const auto& row : lattice.rows) {
        for (const LatticeNode& node : row) {
            j["lattice"].push_back({{"row", node.row},
                                    {"col", node.col},
                                    {"s", node.frenet.s},
                                    {"d", node.frenet.d},
                                    {"x", node.cartesian.x},
                                    {"y", node.cartesian.y},
                                    {"value", node.value},
                                    {"successor", node.successor}});
        }
    }
    if (plan != nullptr) {
        j["waypoints"] = ordered_json::array();
        for (const Vec2& w : plan->waypoints) j["waypoints"].push_back({w.x, w.y});
        j["command_yaw"] = plan->command_yaw;
        j["total_cost"] = plan->total_cost;
    } else {
        j["waypoints"] = nullptr;
        j["command_yaw"] = nullptr;
        j["total_cost"] = nullptr;
    }
    return j;
}

/// Plot-ready CSV of the runner path: t,x,y.
inline std::string trace_to_csv(const EpisodeTrace& trace) {
    std::ostringstream out;
    out << "t,x,y\n";
    for (const FrameRecord& f : trace.frames) {
        out << f.t << ',' << f.position.x << ',' << f.position.y << '\n';
    }
    return out.str();
}

}  // namespace trackguide

#endif  // TRACKGUIDE_SCENARIO_IO_HPP
