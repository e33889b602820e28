#pragma once

#include "hadmm/admm_solver.hpp"
#include "hadmm/agent_dynamics.hpp"
#include "hadmm/qp_assembly.hpp"
#include "hadmm/solver_config.hpp"
#include "hadmm/topology.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hadmm {

enum class ModelKind { quadrotor, double_integrator };
enum class TopologyMode { upper_triangular, distance };
enum class ReferenceMode { interpolated, constant_goal };
enum class Controller { hierarchical, improved, centralized };

std::string to_string(Controller c);
Controller parse_controller(const std::string& s);

struct ScenarioConfig {
    int n_agents = 0;
    ModelKind model = ModelKind::quadrotor;
    QuadrotorParams quadrotor;
    std::vector<Vec> starts;  // full states
    std::vector<Vec> goals;   // full states
    double d_safe = 0.2;
    double d_cmu = 10.0;
    // added to d_safe inside the per-agent constraints only
    double safety_margin = 0.0;
    HorizonSpec horizon;
    Weights weights;
    Bounds bounds;
    SolverConfig solver;
    int steps = 120;
    TopologyMode topology = TopologyMode::upper_triangular;
    ReferenceMode reference = ReferenceMode::interpolated;
    double reference_speed = 1.0;  // [m/s]
    double goal_tolerance = 0.05;  // [m]
    // carry lambda and beta from the previous MPC step; off by default since
    // beta only grows and compounds across steps
    bool warm_start_multipliers = false;
    // uniform start-position perturbation drawn from the seed [m]
    double start_jitter = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
    Vec position(const Vec& state) const { return state.head(horizon.n_p); }
};

// Agents evenly spaced on a circle in the z = 0 plane, each flying to the
// antipodal point. Agent 0 starts at (0, radius, 0).
ScenarioConfig circle_swap_scenario(int n_agents, double radius);

// Planar double-integrator swarm used for small fixtures.
ScenarioConfig double_integrator_scenario(const std::vector<Vec>& start_positions,
                                          const std::vector<Vec>& goal_positions, int T, double dt);

struct AgentStepRecord {
    int step = 0;
    int agent = 0;
    Vec state;    // at the start of the step
    Vec control;  // applied
    double cost = 0.0;
    int outer_iterations = 0;
    int inner_iterations = 0;
    long z_iterations = 0;
    ResidualReport residuals;
    double s_norm = 0.0;
    bool converged = false;
    double wall_time_s = 0.0;
    std::vector<OuterRecord> outer_log;
};

struct TrajectoryLog {
    int n_agents = 0;
    int n_p = 3;
    double dt = 0.05;
    Controller controller = Controller::hierarchical;
    std::vector<AgentStepRecord> records;     // step-major
    std::vector<std::vector<Vec>> snapshots;  // states at steps 0..steps_run
    int steps_run = 0;
    bool reached_goals = false;
    double wall_time_s = 0.0;
    std::string aborted;  // set when a step failed; the log stops before it
};

// Per-agent memory carried between MPC steps.
struct AgentMemory {
    bool valid = false;
    InnerState state;
    Vec lambda;
    double beta = 1.0;
};

struct StepOutput {
    std::vector<Vec> controls;
    std::vector<AgentStepRecord> stats;
};

class StepError : public std::runtime_error {
public:
    StepError(const std::string& what, std::vector<AgentStepRecord> partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}
    const std::vector<AgentStepRecord>& partial() const { return partial_; }

private:
    std::vector<AgentStepRecord> partial_;
};

DiscreteModel agent_model(const ScenarioConfig& sc, const Vec& state);

// x_ref(t+1..t+T) for one agent.
std::vector<Vec> reference_horizon(const ScenarioConfig& sc, const Vec& state, const Vec& goal);

AgentProblem build_problem(const ScenarioConfig& sc, const std::vector<Vec>& world, int agent,
                           const AdjacencyMatrix& adj);

// Per-step worker count: HADMM_THREADS if set, else hardware concurrency.
int worker_count(int tasks);

StepOutput mpc_step(const std::vector<Vec>& world, const ScenarioConfig& sc, Controller controller,
                    std::vector<AgentMemory>& memory, int threads = 1);

// A failing step ends the run early with log.aborted set instead of throwing.
TrajectoryLog run_closed_loop(const ScenarioConfig& sc, Controller controller, int threads = 1);

double min_pairwise_distance(const std::vector<Vec>& positions);
std::vector<double> min_pairwise_distance(const TrajectoryLog& log);

// Drops the first horizon block of each segment and repeats the last one.
Vec shift_blocks(const Vec& v, int T, const std::vector<int>& block_sizes);

}  // namespace hadmm
