// End-to-end tests of the trackguide binary: exit codes, file outputs, and
// the single-frame planning surface.

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "trackguide/scenario_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCli = TRACKGUIDE_CLI_PATH;
const std::string kScenarioDir = TRACKGUIDE_SCENARIO_DIR;

struct CommandResult {
    int exit_code = -1;
    std::string stdout_text;
    std::string stderr_text;
};

CommandResult run_command(const std::string& args) {
    const fs::path dir = fs::temp_directory_path() / "trackguide_cli_test";
    fs::create_directories(dir);
    const fs::path out = dir / "stdout.txt", err = dir / "stderr.txt";
    const std::string cmd =
        kCli + " " + args + " > " + out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    CommandResult result;
    result.exit_code = WEXITSTATUS(status);
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    result.stdout_text = slurp(out);
    result.stderr_text = slurp(err);
    return result;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "trackguide_cli_test" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_scenario(const std::string& name, const json& patch) {
    json base;
    {
        std::ifstream in(kScenarioDir + "/safe_400m.json");
        in >> base;
    }
    for (const auto& item : patch.items()) base[item.key()] = item.value();
    const fs::path path = fresh_dir("scenarios") / name;
    std::ofstream out(path);
    out << base.dump(2);
    return path;
}

}  // namespace

TEST(CliRun, CompletedEpisodeExitsZeroAndWritesFiles) {
    const fs::path out = fresh_dir("run_ok");
    const auto r = run_command("run --scenario " + kScenarioDir +
                               "/detour_single_obstacle.json --out " + out.string() +
                               " --quiet");
    EXPECT_EQ(r.exit_code, 0) << r.stderr_text;
    EXPECT_TRUE(fs::exists(out / "trace.jsonl"));
    EXPECT_TRUE(fs::exists(out / "trace.csv"));
    EXPECT_TRUE(fs::exists(out / "metrics.json"));

    // The CLI's own loaders parse everything it wrote.
    std::ifstream trace_in(out / "trace.jsonl");
    const auto lines = trackguide::parse_trace_jsonl(trace_in);
    EXPECT_GT(lines.size(), 100u);
    std::ifstream metrics_in(out / "metrics.json");
    json metrics;
    metrics_in >> metrics;
    EXPECT_EQ(metrics.at("status"), "completed");
    EXPECT_GE(metrics.at("min_clearance_m").get<double>(), 0.5);

    const json summary = json::parse(r.stdout_text);
    EXPECT_EQ(summary.at("status"), "completed");
}

TEST(CliRun, MissingScenarioExitsOne) {
    const auto r = run_command("run --scenario missing.json");
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.stderr_text.find("scenario file not found"), std::string::npos);
}

TEST(CliRun, UnknownFieldExitsOneAndNamesIt) {
    const fs::path bad = write_scenario("bad.json", {{"speeed_mps", 2.0}});
    const auto r = run_command("run --scenario " + bad.string());
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.stderr_text.find("speeed_mps"), std::string::npos);
}

TEST(CliRun, SeedOverrideIsDeterministic) {
    const fs::path quick = write_scenario(
        "quick.json", {{"goal_distance_m", 12.0},
                       {"sensor", {{"fov_deg", 69.0},
                                   {"max_range_m", 10.0},
                                   {"lateral_noise_sigma_m", 0.03},
                                   {"obstacle_dropout_prob", 0.0},
                                   {"occlusion_enabled", false}}}});
    const fs::path out_a = fresh_dir("seed_a"), out_b = fresh_dir("seed_b");
    ASSERT_EQ(run_command("run --scenario " + quick.string() + " --seed 7 --out " +
                          out_a.string() + " --quiet")
                  .exit_code,
              0);
    ASSERT_EQ(run_command("run --scenario " + quick.string() + " --seed 7 --out " +
                          out_b.string() + " --quiet")
                  .exit_code,
              0);
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    EXPECT_EQ(slurp(out_a / "trace.jsonl"), slurp(out_b / "trace.jsonl"));
}

TEST(CliRun, CollisionExitsTwo) {
    const fs::path crash = write_scenario(
        "crash.json",
        {{"goal_distance_m", 30.0},
         {"obstacles", {{{"lane", 1}, {"s_m", 10.0}, {"d_m", 0.0}, {"radius_m", 0.3}}}},
         {"sensor", {{"fov_deg", 69.0},
                     {"max_range_m", 10.0},
                     {"lateral_noise_sigma_m", 0.0},
                     {"obstacle_dropout_prob", 1.0},
                     {"occlusion_enabled", false}}}});
    const auto r = run_command("run --scenario " + crash.string() + " --out " +
                               fresh_dir("crash_out").string() + " --quiet");
    EXPECT_EQ(r.exit_code, 2);
}

TEST(CliRun, FullBlockageExitsThree) {
    const fs::path walled = write_scenario(
        "walled.json",
        {{"goal_distance_m", 30.0},
         {"track", {{"straight_length_m", 84.39},
                    {"inner_radius_m", 36.80},
                    {"lane_width_m", 1.22},
                    {"num_lanes", 1}}},
         {"obstacles", {{{"lane", 1}, {"s_m", 10.0}, {"d_m", -0.5}, {"radius_m", 0.3}},
                        {{"lane", 1}, {"s_m", 10.0}, {"d_m", 0.0}, {"radius_m", 0.3}},
                        {{"lane", 1}, {"s_m", 10.0}, {"d_m", 0.5}, {"radius_m", 0.3}}}}});
    const auto r = run_command("run --scenario " + walled.string() + " --out " +
                               fresh_dir("walled_out").string() + " --quiet");
    EXPECT_EQ(r.exit_code, 3);
    const json summary = json::parse(r.stdout_text);
    EXPECT_EQ(summary.at("status"), "stopped");
}

TEST(CliRun, DumpsAreWrittenWhenRequested) {
    const fs::path quick = write_scenario("dumps.json", {{"goal_distance_m", 5.0}});
    const fs::path out = fresh_dir("dumps_out");
    ASSERT_EQ(run_command("run --scenario " + quick.string() + " --out " + out.string() +
                          " --dump-observations --dump-plans --quiet")
                  .exit_code,
              0);
    std::ifstream obs_in(out / "observations.jsonl");
    std::string line;
    ASSERT_TRUE(std::getline(obs_in, line));
    const json obs = json::parse(line);
    EXPECT_TRUE(obs.contains("left_boundary"));
    std::ifstream plans_in(out / "plans.jsonl");
    ASSERT_TRUE(std::getline(plans_in, line));
    const json plan = json::parse(line);
    EXPECT_TRUE(plan.contains("lattice"));
    EXPECT_TRUE(plan.at("command_yaw").is_number());
}

TEST(CliRun, SweepWritesPerValueDirectories) {
    const fs::path quick = write_scenario("sweep.json", {{"goal_distance_m", 8.0}});
    const fs::path out = fresh_dir("sweep_out");
    const auto r = run_command("run --scenario " + quick.string() + " --out " + out.string() +
                               " --sweep speed_mps=1.2:0.2:1.4 --quiet");
    EXPECT_EQ(r.exit_code, 0) << r.stderr_text;
    EXPECT_TRUE(fs::exists(out / "speed_mps=1.2" / "metrics.json"));
    EXPECT_TRUE(fs::exists(out / "speed_mps=1.4" / "metrics.json"));
    EXPECT_NE(r.stdout_text.find("speed_mps=1.2 status=completed"), std::string::npos);
}

TEST(CliPlanFrame, EmptyTrackGivesForward) {
    const auto r =
        run_command("plan-frame --scenario " + kScenarioDir + "/safe_400m.json");
    ASSERT_EQ(r.exit_code, 0) << r.stderr_text;
    const json out = json::parse(r.stdout_text);
    EXPECT_EQ(out.at("command"), "forward");
}

TEST(CliPlanFrame, ObstacleAheadForcesADeviation) {
    const auto r = run_command("plan-frame --scenario " + kScenarioDir +
                               "/detour_single_obstacle.json --x 17 --y -36.8");
    ASSERT_EQ(r.exit_code, 0) << r.stderr_text;
    const json out = json::parse(r.stdout_text);
    const std::string command = out.at("command");
    EXPECT_TRUE(command == "left-forward" || command == "right-forward" ||
                command == "turn-left" || command == "turn-right")
        << command;
}

TEST(CliPlanFrame, FullyWalledCorridorEmitsStopWithExitZero) {
    const fs::path walled = write_scenario(
        "walled_frame.json",
        {{"track", {{"straight_length_m", 84.39},
                    {"inner_radius_m", 36.80},
                    {"lane_width_m", 1.22},
                    {"num_lanes", 1}}},
         {"obstacles", {{{"lane", 1}, {"s_m", 5.0}, {"d_m", -0.5}, {"radius_m", 0.3}},
                        {{"lane", 1}, {"s_m", 5.0}, {"d_m", 0.0}, {"radius_m", 0.3}},
                        {{"lane", 1}, {"s_m", 5.0}, {"d_m", 0.5}, {"radius_m", 0.3}}}}});
    const auto r = run_command("plan-frame --scenario " + walled.string());
    ASSERT_EQ(r.exit_code, 0) << r.stderr_text;
    const json out = json::parse(r.stdout_text);
    EXPECT_EQ(out.at("command"), "stop");
    EXPECT_TRUE(out.at("plan").at("waypoints").is_null());
}

TEST(CliTrack, DefaultLayoutSummary) {
    const auto r = run_command("track --out " + (fresh_dir("track") / "t.csv").string());
    ASSERT_EQ(r.exit_code, 0);
    const json summary = json::parse(r.stderr_text);
    EXPECT_NEAR(summary.at("lane1_length_m").get<double>(), 400.0, 0.05);
}

TEST(CliTrack, TwoLaneCsvHasBothLanes) {
    const fs::path csv = fresh_dir("track2") / "t.csv";
    ASSERT_EQ(run_command("track --lanes 2 --lane-width 1.22 --out " + csv.string()).exit_code,
              0);
    std::ifstream in(csv);
    std::string line;
    bool lane2 = false;
    std::getline(in, line);
    EXPECT_EQ(line, "lane,side,x,y");
    while (std::getline(in, line)) {
        if (line.rfind("2,", 0) == 0) lane2 = true;
    }
    EXPECT_TRUE(lane2);
}

TEST(CliTrack, NonPositiveDimensionExitsOne) {
    EXPECT_EQ(run_command("track --inner-radius -1").exit_code, 1);
}
