#include "hadmm/cli.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hadmm;
namespace fs = std::filesystem;

namespace {

const char* kToy = R"({
  "n_agents": 2,
  "model": "double_integrator",
  "horizon": {"T": 3, "m": 2, "n": 4, "n_p": 2, "dt": 0.1},
  "starts": [[0, 0], [0.21, 0]],
  "goals": [[1, 0], [-1, 0]],
  "weights": {"q": [1, 1, 0, 0], "r": [0.1, 0.1], "q_terminal": [1, 1, 0, 0]},
  "bounds": {"u_lo": [-5, -5], "u_hi": [5, 5], "x_lo": [-100, -100, -100, -100], "x_hi": [100, 100, 100, 100]},
  "steps": 3,
  "solver": {"max_inner": 10, "max_total_inner": 40}
})";

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string error_of(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("hadmm_cli_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

fs::path write_toy(const fs::path& dir) {
    const fs::path p = dir / "toy.json";
    std::ofstream(p) << kToy;
    return p;
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(Parse, ToyScenario) {
    const auto sc = parse_scenario(kToy);
    EXPECT_EQ(sc.n_agents, 2);
    EXPECT_EQ(sc.model, ModelKind::double_integrator);
    ASSERT_EQ(sc.starts[1].size(), 4);
    EXPECT_EQ(sc.starts[1](0), 0.21);
    EXPECT_EQ(sc.starts[1].tail(2).norm(), 0.0);  // padded velocity
    EXPECT_EQ(sc.solver.max_inner, 10);
    EXPECT_EQ(sc.solver.beta0, 1.0);
    EXPECT_NO_THROW(sc.validate());
}

TEST(Parse, MissingOrSmallAgentCount) {
    EXPECT_EQ(error_of(R"({"starts": [], "goals": []})"), "n_agents ≥ 2 required");
    EXPECT_EQ(error_of(R"({"n_agents": 1, "starts": [[0,0,0]], "goals": [[1,0,0]]})"), "n_agents ≥ 2 required");
}

TEST(Parse, StrictKeysAndTypes) {
    nlohmann::json j = nlohmann::json::parse(kToy);
    j["solver"]["betaa"] = 2;
    EXPECT_EQ(error_of(j.dump()), "unknown key 'solver.betaa'");
    j = nlohmann::json::parse(kToy);
    j["colour"] = "red";
    EXPECT_EQ(error_of(j.dump()), "unknown key 'colour'");
    j = nlohmann::json::parse(kToy);
    j["solver"]["max_inner"] = 2.5;
    EXPECT_NE(error_of(j.dump()).find("solver.max_inner"), std::string::npos);
    j = nlohmann::json::parse(kToy);
    j["d_safe"] = "0.2";
    EXPECT_NE(error_of(j.dump()).find("d_safe"), std::string::npos);
    j = nlohmann::json::parse(kToy);
    j["starts"][0] = {0, 0, 0};
    EXPECT_NE(error_of(j.dump()).find("starts"), std::string::npos);
    EXPECT_THROW(parse_scenario("{not json"), InputError);
    EXPECT_THROW(load_scenario("/nonexistent/scenario.json"), InputError);
}

TEST(Parse, DumpRoundTrip) {
    auto sc = circle_swap_scenario(4, 1.5);
    sc.solver.max_inner = 7;
    sc.seed = 99;
    const auto back = parse_scenario(dump_scenario(sc));
    EXPECT_EQ(back.n_agents, 4);
    EXPECT_EQ(back.starts, sc.starts);
    EXPECT_EQ(back.goals, sc.goals);
    EXPECT_EQ(back.bounds.x_hi, sc.bounds.x_hi);
    EXPECT_EQ(back.solver.max_inner, 7);
    EXPECT_EQ(back.seed, 99u);
    EXPECT_EQ(dump_scenario(back), dump_scenario(sc));
}

TEST(Parse, ShippedScenarioLoads) {
    const char* dir = std::getenv("HADMM_SCENARIO_DIR");
    ASSERT_NE(dir, nullptr);
    const auto sc = load_scenario(std::string(dir) + "/circle_swap_8.json");
    EXPECT_EQ(sc.n_agents, 8);
    EXPECT_NO_THROW(sc.validate());
}

TEST(Format, TwelveSignificantDigits) {
    EXPECT_EQ(fmt_num(1.0 / 3.0), "0.333333333333");
    EXPECT_EQ(fmt_num(2.0), "2");
    EXPECT_EQ(fmt_num(-1234567.891011121), "-1234567.89101");
    EXPECT_EQ(fmt_num(1e-20), "1e-20");
}

TEST(Simulate, WritesArtifacts) {
    const fs::path dir = scratch("sim");
    std::ostringstream out, err;
    SimulateArgs a;
    a.scenario = write_toy(dir).string();
    a.out = (dir / "run").string();
    ASSERT_EQ(cmd_simulate(a, out, err), 0) << err.str();
    const std::string traj = slurp(dir / "run" / "trajectory.csv");
    EXPECT_EQ(traj.substr(0, traj.find('\n')), "step,time_s,agent_id,px,py,pz,vx,vy,vz,phi,theta,psi,wx,wy,wz,u1,u2,u3,u4");
    EXPECT_EQ(count_lines(traj), 1 + 3 * 2);
    const std::string dist = slurp(dir / "run" / "distances.csv");
    EXPECT_EQ(dist.substr(0, dist.find('\n')), "step,pair_i,pair_j,distance_m");
    EXPECT_EQ(count_lines(dist), 1 + 4);
    EXPECT_NE(dist.find("\n0,0,1,0.21\n"), std::string::npos);
    const auto m = nlohmann::json::parse(slurp(dir / "run" / "metrics.json"));
    EXPECT_EQ(m["steps_run"], 3);
    EXPECT_EQ(m["per_step"].size(), 3u);
    EXPECT_EQ(m["variant"], "hierarchical");
    fs::remove_all(dir);
}

TEST(Simulate, Deterministic) {
    const fs::path dir = scratch("det");
    std::ostringstream out, err;
    SimulateArgs a;
    a.scenario = write_toy(dir).string();
    a.variant = "improved";
    a.out = (dir / "a").string();
    ASSERT_EQ(cmd_simulate(a, out, err), 0) << err.str();
    a.out = (dir / "b").string();
    ASSERT_EQ(cmd_simulate(a, out, err), 0) << err.str();
    EXPECT_EQ(slurp(dir / "a" / "trajectory.csv"), slurp(dir / "b" / "trajectory.csv"));
    EXPECT_EQ(slurp(dir / "a" / "distances.csv"), slurp(dir / "b" / "distances.csv"));
    fs::remove_all(dir);
}

TEST(Simulate, OverridesAndErrors) {
    const fs::path dir = scratch("ovr");
    std::ostringstream out, err;
    SimulateArgs a;
    a.scenario = write_toy(dir).string();
    a.out = (dir / "run").string();
    a.steps = 1;
    ASSERT_EQ(cmd_simulate(a, out, err), 0) << err.str();
    EXPECT_EQ(count_lines(slurp(dir / "run" / "trajectory.csv")), 1 + 2);
    a.variant = "bogus";
    EXPECT_EQ(cmd_simulate(a, out, err), 2);
    EXPECT_NE(err.str().find("bogus"), std::string::npos);
    fs::remove_all(dir);
}

TEST(Compare, ReportMatchesTable) {
    const fs::path dir = scratch("cmp");
    std::ostringstream out, err;
    CompareArgs a;
    a.scenario = write_toy(dir).string();
    a.variants = {"hierarchical", "improved", "centralized"};
    a.out = dir.string();
    ASSERT_EQ(cmd_compare(a, out, err), 0) << err.str();
    const auto rep = nlohmann::json::parse(slurp(dir / "report.json"));
    ASSERT_EQ(rep["rows"].size(), 3u);
    const std::string table = slurp(dir / "report.txt");
    EXPECT_EQ(table, out.str());
    EXPECT_EQ(count_lines(table), 4);
    for (const auto& row : rep["rows"]) {
        EXPECT_NE(table.find(row["variant"].get<std::string>()), std::string::npos);
        EXPECT_EQ(row["agent_steps"], 6);
        const double outer = row["avg_outer_iterations"], inner = row["avg_inner_iterations"];
        EXPECT_NEAR(row["avg_inner_per_outer"].get<double>(), inner / outer, 1e-9);
    }
    fs::remove_all(dir);
}

TEST(Compare, CentralizedLimitedToSmallSwarms) {
    const fs::path dir = scratch("lim");
    std::ofstream(dir / "big.json") << dump_scenario(circle_swap_scenario(8, 2.0));
    std::ostringstream out, err;
    CompareArgs a;
    a.scenario = (dir / "big.json").string();
    a.variants = {"centralized"};
    a.out = dir.string();
    EXPECT_EQ(cmd_compare(a, out, err), 2);
    EXPECT_NE(err.str().find("--force-centralized"), std::string::npos);
    EXPECT_FALSE(fs::exists(dir / "report.json"));
    fs::remove_all(dir);
}

TEST(Check, Suites) {
    std::ostringstream out, err;
    EXPECT_EQ(cmd_check({"projections", 1, 1.5}, out, err), 0);
    EXPECT_NE(out.str().find("projections: PASS"), std::string::npos);
    out.str("");
    EXPECT_EQ(cmd_check({"descent", 1, 1.0}, out, err), 0);
    EXPECT_NE(out.str().find("SKIPPED"), std::string::npos);
    EXPECT_EQ(cmd_check({"nonsense", 1, 1.5}, out, err), 2);
}
