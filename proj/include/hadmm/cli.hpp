#pragma once

#include "hadmm/simulator.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hadmm {

// Strict: unknown keys and wrongly typed values throw ConfigError naming the
// key path. Missing keys keep the ScenarioConfig defaults, except n_agents,
// starts and goals. Start and goal vectors may hold positions only.
ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario(const std::string& path);
std::string dump_scenario(const ScenarioConfig& sc);

struct VariantReport {
    std::string variant;
    int agent_steps = 0;
    double avg_outer = 0.0;
    double avg_inner = 0.0;
    double avg_inner_per_outer = 0.0;
    long total_inner = 0;
    long total_outer = 0;
    double final_eq_residual = 0.0;  // max over agents at the last step
    double total_cost = 0.0;
    double wall_time_s = 0.0;
    // stopping quantities at the last step, max over agents
    double r1 = 0.0, r2 = 0.0, r3 = 0.0, s_norm = 0.0;
    double converged_fraction = 0.0;
    double min_distance = 0.0;
    bool reached_goals = false;
};

struct RunReport {
    std::vector<VariantReport> rows;
};

VariantReport summarize(const TrajectoryLog& log);

// %.12g
std::string fmt_num(double v);

void write_trajectory_csv(std::ostream& os, const TrajectoryLog& log);
void write_distances_csv(std::ostream& os, const TrajectoryLog& log);
std::string metrics_json(const TrajectoryLog& log, const VariantReport& rep);
std::string report_json(const RunReport& rep);
std::string report_table(const RunReport& rep);

struct SimulateArgs {
    std::string scenario;
    std::string variant = "hierarchical";
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    std::optional<int> steps;
};

struct CompareArgs {
    std::string scenario;
    std::vector<std::string> variants{"hierarchical", "improved"};
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    std::optional<int> steps;
    bool force_centralized = false;
};

struct CheckArgs {
    std::string suite;
    std::uint64_t seed = 0;
    double rho_factor = 1.5;
};

// Return process exit codes (0 ok, 1 a run stopped early but its artifacts
// were written, 2 error); messages go to the given streams.
int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err);
int cmd_compare(const CompareArgs& a, std::ostream& out, std::ostream& err);
int cmd_check(const CheckArgs& a, std::ostream& out, std::ostream& err);

int run_cli(int argc, char** argv);

}  // namespace hadmm
