// trackguide command-line tool: run simulated guidance episodes, inspect
// single planning frames, and export track geometry.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "trackguide/trackguide.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace trackguide;

namespace {

int status_to_exit(EpisodeStatus status) {
    switch (status) {
        case EpisodeStatus::Completed: return 0;
        case EpisodeStatus::Collided: return 2;
        case EpisodeStatus::Stopped:
        case EpisodeStatus::Timeout: return 3;
    }
    return 3;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

struct EpisodeFiles {
    bool dump_observations = false;
    bool dump_plans = false;
};

/// Run one episode and write trace.jsonl, trace.csv, metrics.json (plus
/// optional dumps) into `dir`. Returns the trace/metrics pair.
std::pair<EpisodeTrace, Metrics> run_and_write(const ScenarioSpec& spec, const fs::path& dir,
                                               const EpisodeFiles& files) {
    fs::create_directories(dir);
    std::ostringstream observations, plans;
    FrameCallback on_frame;
    if (files.dump_observations || files.dump_plans) {
        on_frame = [&](const FrameDecision& decision, const FrameRecord& rec) {
            if (files.dump_observations) {
                observations << observation_to_json(decision.observation).dump() << '\n';
            }
            if (files.dump_plans) {
                plans << plan_to_json(decision.lattice,
                                      decision.plan ? &*decision.plan : nullptr, rec.t)
                             .dump()
                      << '\n';
            }
        };
    }
    auto [trace, metrics] = run_episode(spec, on_frame);
    write_file(dir / "trace.jsonl", trace_to_jsonl(trace));
    write_file(dir / "trace.csv", trace_to_csv(trace));
    write_file(dir / "metrics.json", metrics_to_json(metrics, trace.status).dump(2) + "\n");
    if (files.dump_observations) write_file(dir / "observations.jsonl", observations.str());
    if (files.dump_plans) write_file(dir / "plans.jsonl", plans.str());
    return {std::move(trace), metrics};
}

struct SweepRange {
    std::string key;
    double start = 0.0, step = 0.0, end = 0.0;
};

SweepRange parse_sweep(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
        throw std::invalid_argument("sweep: expected KEY=START:STEP:END, got '" + text + "'");
    }
    SweepRange range;
    range.key = text.substr(0, eq);
    const std::string rest = text.substr(eq + 1);
    char c1 = 0, c2 = 0;
    std::istringstream in(rest);
    if (!(in >> range.start >> c1 >> range.step >> c2 >> range.end) || c1 != ':' ||
        c2 != ':' || range.step == 0.0) {
        throw std::invalid_argument("sweep: expected KEY=START:STEP:END with nonzero step");
    }
    return range;
}

std::vector<double> sweep_values(const SweepRange& range) {
    std::vector<double> values;
    const double eps = 1e-9 * std::max(1.0, std::abs(range.step));
    for (int i = 0;; ++i) {
        const double v = range.start + i * range.step;
        if (range.step > 0.0 ? v > range.end + eps : v < range.end - eps) break;
        values.push_back(v);
    }
    if (values.empty()) throw std::invalid_argument("sweep: empty value range");
    return values;
}

int cmd_run(const std::string& scenario_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed_override, const EpisodeFiles& files,
            const std::string& sweep_expr, bool quiet) {
    std::ifstream in(scenario_path);
    if (!in) {
        std::cerr << "error: scenario file not found: " << scenario_path << "\n";
        return 1;
    }
    json base;
    try {
        in >> base;
    } catch (const json::exception& e) {
        std::cerr << "error: scenario file is not valid JSON: " << e.what() << "\n";
        return 1;
    }
    if (seed_override) base["seed"] = *seed_override;

    if (sweep_expr.empty()) {
        ScenarioSpec spec;
        try {
            spec = scenario_from_json(base);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
        const auto [trace, metrics] = run_and_write(spec, out_dir, files);
        if (!quiet) {
            for (const FrameRecord& f : trace.frames) std::cout << emit(f.command) << '\n';
        }
        std::cout << metrics_to_json(metrics, trace.status).dump(2) << std::endl;
        return status_to_exit(trace.status);
    }

    // Parameter sweep: one episode per value, fanned out across threads,
    // each with its own output directory.
    SweepRange range;
    std::vector<double> values;
    try {
        range = parse_sweep(sweep_expr);
        values = sweep_values(range);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::string pointer = "/" + range.key;
    std::replace(pointer.begin(), pointer.end(), '.', '/');

    struct SweepResult {
        double value;
        EpisodeStatus status;
        Metrics metrics;
    };
    std::vector<std::future<SweepResult>> futures;
    try {
        for (const double v : values) {
            json patched = base;
            patched[json::json_pointer(pointer)] = v;
            ScenarioSpec spec = scenario_from_json(patched);  // validate before launching
            const fs::path dir =
                fs::path(out_dir) / (range.key + "=" + json(v).dump());
            futures.push_back(std::async(std::launch::async, [spec, dir, files] {
                auto [trace, metrics] = run_and_write(spec, dir, files);
                return SweepResult{0.0, trace.status, metrics};
            }));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    int worst = 0;
    std::cout << "sweep " << range.key << "\n";
    for (std::size_t i = 0; i < futures.size(); ++i) {
        SweepResult r = futures[i].get();
        r.value = values[i];
        std::cout << range.key << "=" << json(r.value).dump() << " status=" << to_string(r.status)
                  << " distance_m=" << r.metrics.distance
                  << " average_speed_mps=" << r.metrics.average_speed
                  << " boundary_violations=" << r.metrics.boundary_violations << "\n";
        worst = std::max(worst, status_to_exit(r.status));
    }
    return worst;
}

int cmd_plan_frame(const std::string& scenario_path, std::optional<double> x,
                   std::optional<double> y, std::optional<double> heading_deg,
                   const std::vector<std::string>& obstacle_args) {
    ScenarioSpec spec;
    try {
        spec = load_scenario(scenario_path);
        if (!obstacle_args.empty()) {
            spec.obstacles.clear();
            for (const std::string& arg : obstacle_args) {
                Obstacle ob;
                char c1 = 0, c2 = 0;
                std::istringstream in(arg);
                if (!(in >> ob.position.x >> c1 >> ob.position.y >> c2 >> ob.radius) ||
                    c1 != ',' || c2 != ',') {
                    throw std::invalid_argument("--obstacle expects X,Y,R; got '" + arg + "'");
                }
                spec.obstacles.push_back(ob);
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    const TrackModel track = TrackModel::generate(spec.track);
    const Curve2D& centerline = track.lane(spec.start_lane).centerline;
    Pose2 pose{centerline.position_at(spec.start_arc), centerline.yaw_at(spec.start_arc)};
    if (x) pose.position.x = *x;
    if (y) pose.position.y = *y;
    if (heading_deg) pose.heading = deg2rad(*heading_deg);
    const int lane = track.lane_at(pose.position).value_or(spec.start_lane);

    const FrameDecision decision =
        plan_one_frame(track, spec.obstacles, pose, lane, spec,
                       detail::mix_seed(spec.seed, 0), DirectionCommand::Forward, 0.0);

    ordered_json out;
    out["pose"] = {{"x", pose.position.x}, {"y", pose.position.y}, {"heading", pose.heading}};
    out["lane"] = lane;
    out["observation"] = observation_to_json(decision.observation);
    out["plan"] = plan_to_json(decision.lattice, decision.plan ? &*decision.plan : nullptr, 0.0);
    out["command"] = std::string(emit(decision.command));
    out["widened"] = decision.widened;
    std::cout << out.dump(2) << std::endl;
    return 0;
}

int cmd_track(double straight_length, double inner_radius, double lane_width, int lanes,
              int points_per_arc, const std::string& out_file) {
    TrackLayout layout{straight_length, inner_radius, lane_width, lanes};
    TrackModel track;
    try {
        track = TrackModel::generate(layout, points_per_arc);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    std::ostringstream csv;
    csv << "lane,side,x,y\n";
    for (int k = 1; k <= track.num_lanes(); ++k) {
        const LaneGeometry& lane = track.lane(k);
        for (double s = 0.0; s < lane.centerline.total_length(); s += 0.5) {
            const Vec2 p = lane.centerline.position_at(s);
            csv << k << ",center," << p.x << ',' << p.y << '\n';
        }
        for (const Vec2& p : lane.left_boundary) {
            csv << k << ",left," << p.x << ',' << p.y << '\n';
        }
        for (const Vec2& p : lane.right_boundary) {
            csv << k << ",right," << p.x << ',' << p.y << '\n';
        }
    }
    if (out_file.empty() || out_file == "-") {
        std::cout << csv.str();
    } else {
        write_file(out_file, csv.str());
    }

    ordered_json summary;
    for (int k = 1; k <= track.num_lanes(); ++k) {
        summary["lane_lengths_m"].push_back(track.lane(k).centerline.total_length());
    }
    summary["lane1_length_m"] = track.lane(1).centerline.total_length();
    std::cerr << summary.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"trackguide: track-running guidance planner and closed-loop simulator"};
    app.require_subcommand(1);

    // run
    std::string scenario_path, out_dir = "out", sweep_expr;
    std::optional<std::uint64_t> seed_override;
    EpisodeFiles files;
    bool quiet = false;
    CLI::App* run = app.add_subcommand("run", "Run a scenario episode (or a parameter sweep)");
    run->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--seed", seed_override, "Override the scenario seed");
    run->add_flag("--dump-observations", files.dump_observations,
                  "Write per-frame observations.jsonl");
    run->add_flag("--dump-plans", files.dump_plans, "Write per-frame plans.jsonl");
    run->add_option("--sweep", sweep_expr, "Sweep KEY=START:STEP:END over a scenario field");
    run->add_flag("--quiet", quiet, "Suppress the per-frame command token stream");

    // plan-frame
    std::string pf_scenario;
    std::optional<double> pf_x, pf_y, pf_heading_deg;
    std::vector<std::string> pf_obstacles;
    CLI::App* pf = app.add_subcommand("plan-frame", "Plan a single frame and print it as JSON");
    pf->add_option("--scenario", pf_scenario, "Scenario JSON file")->required();
    pf->add_option("--x", pf_x, "Runner world x (default: scenario start)");
    pf->add_option("--y", pf_y, "Runner world y");
    pf->add_option("--heading-deg", pf_heading_deg, "Runner heading in degrees");
    pf->add_option("--obstacle", pf_obstacles,
                   "Replace scenario obstacles with X,Y,R (repeatable)");

    // track
    double straight = 84.39, inner = 36.80, width = 1.22;
    int lanes = 8, ppa = 64;
    std::string track_out;
    CLI::App* tr = app.add_subcommand("track", "Export track geometry as CSV");
    tr->add_option("--straight-length", straight, "Straight length in meters");
    tr->add_option("--inner-radius", inner, "Lane-1 centerline curve radius in meters");
    tr->add_option("--lane-width", width, "Lane width in meters");
    tr->add_option("--lanes", lanes, "Number of lanes");
    tr->add_option("--points-per-arc", ppa, "Centerline samples per semicircle");
    tr->add_option("--out", track_out, "CSV output file (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return cmd_run(scenario_path, out_dir, seed_override, files, sweep_expr, quiet);
        }
        if (pf->parsed()) {
            return cmd_plan_frame(pf_scenario, pf_x, pf_y, pf_heading_deg, pf_obstacles);
        }
        if (tr->parsed()) {
            return cmd_track(straight, inner, width, lanes, ppa, track_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
