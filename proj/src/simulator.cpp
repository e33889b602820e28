#include "hadmm/simulator.hpp"

#include "hadmm/centralized_baseline.hpp"
#include "hadmm/inner_solver.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

namespace hadmm {

std::string to_string(Controller c) {
    switch (c) {
        case Controller::hierarchical: return "hierarchical";
        case Controller::improved: return "improved";
        case Controller::centralized: return "centralized";
    }
    return "unknown";
}

Controller parse_controller(const std::string& s) {
    if (s == "hierarchical") return Controller::hierarchical;
    if (s == "improved") return Controller::improved;
    if (s == "centralized") return Controller::centralized;
    throw ConfigError("variant: unknown value '" + s + "'");
}

void ScenarioConfig::validate() const {
    if (n_agents < 2) throw ConfigError("n_agents ≥ 2 required");
    horizon.validate();
    if (model == ModelKind::quadrotor) {
        quadrotor.validate();
        if (horizon.n != 12 || horizon.m != 4 || horizon.n_p != 3)
            throw ConfigError("horizon: quadrotor needs n = 12, m = 4, n_p = 3");
    } else if (horizon.n != 2 * horizon.n_p || horizon.m != horizon.n_p || horizon.n_p > 3) {
        throw ConfigError("horizon: double integrator needs n = 2 n_p, m = n_p, n_p <= 3");
    }
    if (static_cast<int>(starts.size()) != n_agents) throw ConfigError("starts: expected one state per agent");
    if (static_cast<int>(goals.size()) != n_agents) throw ConfigError("goals: expected one state per agent");
    for (const auto& s : starts)
        if (s.size() != horizon.n) throw ConfigError("starts: state has the wrong dimension");
    for (const auto& g : goals)
        if (g.size() != horizon.n) throw ConfigError("goals: state has the wrong dimension");
    if (!(d_safe > 0.0)) throw ConfigError("d_safe must be positive");
    if (!(d_cmu > d_safe + safety_margin)) throw ConfigError("d_cmu must exceed d_safe + safety_margin");
    if (!(safety_margin >= 0.0)) throw ConfigError("safety_margin must be nonnegative");
    for (int i = 0; i < n_agents; ++i)
        for (int j = i + 1; j < n_agents; ++j) {
            if ((position(starts[i]) - position(starts[j])).norm() < d_safe)
                throw ConfigError("starts: agents closer than d_safe");
            if ((position(goals[i]) - position(goals[j])).norm() < d_safe)
                throw ConfigError("goals: agents closer than d_safe");
        }
    auto check = [](const Vec& v, int size, const char* name) {
        if (v.size() != size) throw ConfigError(std::string(name) + ": wrong dimension");
        if ((v.array() < 0.0).any()) throw ConfigError(std::string(name) + ": negative weight");
    };
    check(weights.q, horizon.n, "weights.q");
    check(weights.r, horizon.m, "weights.r");
    check(weights.q_T, horizon.n, "weights.q_terminal");
    if (bounds.u_lo.size() != horizon.m || bounds.u_hi.size() != horizon.m)
        throw ConfigError("bounds.u: wrong dimension");
    if (bounds.x_lo.size() != horizon.n || bounds.x_hi.size() != horizon.n)
        throw ConfigError("bounds.x: wrong dimension");
    if (!(bounds.u_lo.array() < bounds.u_hi.array()).all()) throw ConfigError("bounds.u: crossed");
    if (!(bounds.x_lo.array() < bounds.x_hi.array()).all()) throw ConfigError("bounds.x: crossed");
    if (!(bounds.u_lo.array() <= 0.0).all() || !(bounds.u_hi.array() >= 0.0).all())
        throw ConfigError("bounds.u: zero input must be admissible");
    solver.validate();
    if (steps < 1) throw ConfigError("steps must be >= 1");
    if (!(reference_speed > 0.0)) throw ConfigError("reference_speed must be positive");
    if (!(goal_tolerance >= 0.0)) throw ConfigError("goal_tolerance must be nonnegative");
    if (!(start_jitter >= 0.0)) throw ConfigError("start_jitter must be nonnegative");
}

ScenarioConfig circle_swap_scenario(int n_agents, double radius) {
    if (n_agents < 2) throw ConfigError("n_agents ≥ 2 required");
    if (!(radius > 0.0)) throw ConfigError("radius must be positive");
    ScenarioConfig sc;
    sc.n_agents = n_agents;
    sc.model = ModelKind::quadrotor;
    sc.horizon = HorizonSpec{25, 4, 12, 3, 0.05};
    for (int k = 0; k < n_agents; ++k) {
        const double a = std::numbers::pi / 2.0 - 2.0 * std::numbers::pi * k / n_agents;
        Vec s = Vec::Zero(12), g = Vec::Zero(12);
        s.head(3) << radius * std::cos(a), radius * std::sin(a), 0.0;
        g.head(3) = -s.head(3);
        sc.starts.push_back(s);
        sc.goals.push_back(g);
    }
    sc.weights.q = Vec::Zero(12);
    sc.weights.q.head(3).setOnes();
    sc.weights.r = Vec::Zero(4);
    sc.weights.q_T = sc.weights.q;
    const double pi = std::numbers::pi;
    sc.bounds.u_lo = Vec::Constant(4, -1.96);
    sc.bounds.u_hi = Vec::Constant(4, 1.96);
    sc.bounds.x_hi.resize(12);
    sc.bounds.x_hi << 100, 100, 100, 5, 5, 5, pi, pi / 2, pi, 50, 50, 50;
    sc.bounds.x_lo = -sc.bounds.x_hi;
    return sc;
}

ScenarioConfig double_integrator_scenario(const std::vector<Vec>& start_positions,
                                          const std::vector<Vec>& goal_positions, int T, double dt) {
    if (start_positions.empty() || start_positions.size() != goal_positions.size())
        throw ConfigError("starts and goals must be non-empty and of equal count");
    const int np = static_cast<int>(start_positions.front().size());
    ScenarioConfig sc;
    sc.n_agents = static_cast<int>(start_positions.size());
    sc.model = ModelKind::double_integrator;
    sc.horizon = HorizonSpec{T, np, 2 * np, np, dt};
    for (std::size_t i = 0; i < start_positions.size(); ++i) {
        Vec s = Vec::Zero(2 * np), g = Vec::Zero(2 * np);
        s.head(np) = start_positions[i];
        g.head(np) = goal_positions[i];
        sc.starts.push_back(s);
        sc.goals.push_back(g);
    }
    sc.weights.q = Vec::Zero(2 * np);
    sc.weights.q.head(np).setOnes();
    sc.weights.r = Vec::Constant(np, 0.1);
    sc.weights.q_T = sc.weights.q;
    sc.bounds.u_lo = Vec::Constant(np, -5.0);
    sc.bounds.u_hi = Vec::Constant(np, 5.0);
    sc.bounds.x_hi = Vec::Constant(2 * np, 100.0);
    sc.bounds.x_lo = -sc.bounds.x_hi;
    return sc;
}

DiscreteModel agent_model(const ScenarioConfig& sc, const Vec& state) {
    if (sc.model == ModelKind::double_integrator) return double_integrator(sc.horizon.n_p, sc.horizon.dt);
    return discretize(sdc_linearize(state, sc.quadrotor), sc.horizon.dt);
}

std::vector<Vec> reference_horizon(const ScenarioConfig& sc, const Vec& state, const Vec& goal) {
    const int np = sc.horizon.n_p;
    const Vec p = state.head(np);
    const Vec delta = goal.head(np) - p;
    const double dist = delta.norm();
    std::vector<Vec> ref;
    ref.reserve(sc.horizon.T);
    for (int t = 1; t <= sc.horizon.T; ++t) {
        Vec x = goal;
        if (sc.reference == ReferenceMode::interpolated && dist > 0.0) {
            const double travel = std::min(sc.reference_speed * t * sc.horizon.dt, dist);
            x.head(np) = p + (travel / dist) * delta;
        }
        ref.push_back(std::move(x));
    }
    return ref;
}

namespace {

AdjacencyMatrix topology_for(const ScenarioConfig& sc, const std::vector<Vec>& world) {
    if (sc.topology == TopologyMode::upper_triangular) return upper_triangular_topology(sc.n_agents);
    std::vector<Vec> pos;
    for (const auto& x : world) pos.push_back(sc.position(x));
    return build_adjacency(pos, sc.d_safe, sc.d_cmu);
}

}  // namespace

AgentProblem build_problem(const ScenarioConfig& sc, const std::vector<Vec>& world, int agent,
                           const AdjacencyMatrix& adj) {
    const NeighborSet ns = neighbors(adj, agent);
    const int np = sc.horizon.n_p;
    Vec snap(ns.r() * np);
    for (int j = 0; j < ns.r(); ++j) snap.segment(j * np, np) = sc.position(world[ns.neighbor_ids[j]]);
    const DiscreteModel model = agent_model(sc, world[agent]);
    return make_agent_problem(sc.horizon, model, world[agent], sc.weights,
                              reference_horizon(sc, world[agent], sc.goals[agent]), sc.bounds, snap,
                              sc.d_safe + sc.safety_margin, sc.d_cmu);
}

int worker_count(int tasks) {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("HADMM_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) n = static_cast<int>(v);
    }
    return std::max(1, std::min(n, tasks));
}

Vec shift_blocks(const Vec& v, int T, const std::vector<int>& block_sizes) {
    Vec out(v.size());
    Eigen::Index off = 0;
    for (int b : block_sizes) {
        const Eigen::Index len = static_cast<Eigen::Index>(T) * b;
        if (off + len > v.size()) throw InputError("shift_blocks: layout exceeds the vector");
        if (T > 1) out.segment(off, len - b) = v.segment(off + b, len - b);
        out.segment(off + len - b, b) = v.segment(off + len - b, b);
        off += len;
    }
    if (off != v.size()) throw InputError("shift_blocks: layout does not cover the vector");
    return out;
}

namespace {

template <class Fn>
void parallel_for(int tasks, int threads, Fn&& fn) {
    if (threads <= 1 || tasks <= 1) {
        for (int i = 0; i < tasks; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (int i = next++; i < tasks; i = next++) fn(i);
        });
    for (auto& t : pool) t.join();
}

SolverStart start_for(const ScenarioConfig& sc, const AgentProblem& prob, const DiscreteModel& model,
                      const Vec& x0, const AgentMemory& mem) {
    const HorizonSpec& h = sc.horizon;
    if (!mem.valid) return cold_start(prob, rollout(model, x0, Vec::Zero(h.T * h.m), h), sc.solver);
    SolverStart st;
    const int b = h.block();
    st.state.z = shift_blocks(mem.state.z, h.T, {b});
    st.state.z_f = shift_blocks(mem.state.z_f, h.T, {b, b});
    st.state.s = shift_blocks(mem.state.s, h.T, {h.n, b, b});
    st.state.y = Vec::Zero(st.state.s.size());
    if (sc.warm_start_multipliers) {
        st.lambda = shift_blocks(mem.lambda, h.T, {h.n, b, b});
        st.beta = mem.beta;
    } else {
        st.lambda = Vec::Zero(st.state.s.size());
        st.beta = sc.solver.beta0;
    }
    return st;
}

AgentStepRecord solve_one(const ScenarioConfig& sc, const std::vector<Vec>& world, int i,
                          const AdjacencyMatrix& adj, Controller controller, AgentMemory& mem, Vec& control) {
    const auto t0 = std::chrono::steady_clock::now();
    const AgentProblem prob = build_problem(sc, world, i, adj);
    const DiscreteModel model = agent_model(sc, world[i]);
    SolverConfig cfg = sc.solver;
    cfg.variant = controller == Controller::improved ? Variant::improved : Variant::hierarchical;
    const SolverStart start = start_for(sc, prob, model, world[i], mem);
    SolveResult res;
    if (cfg.variant == Variant::improved) res = solve_agent(prob, cfg, ImprovedZSolver(cfg), start);
    else res = solve_agent(prob, cfg, HierarchicalZSolver(cfg), start);

    mem.valid = true;
    mem.state = res.state;
    mem.lambda = res.outer.lambda;
    mem.beta = res.outer.beta;

    // actuator saturation
    control = res.state.z.head(sc.horizon.m).cwiseMax(sc.bounds.u_lo).cwiseMin(sc.bounds.u_hi);

    AgentStepRecord rec;
    rec.agent = i;
    rec.state = world[i];
    rec.control = control;
    rec.cost = res.stats.cost;
    rec.outer_iterations = res.stats.outer_iterations;
    rec.inner_iterations = res.stats.inner_iterations;
    rec.z_iterations = res.stats.z_iterations;
    rec.residuals = res.stats.final;
    rec.s_norm = res.stats.s_norm;
    rec.converged = res.stats.converged;
    rec.outer_log = std::move(res.stats.outer_log);
    rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

}  // namespace

StepOutput mpc_step(const std::vector<Vec>& world, const ScenarioConfig& sc, Controller controller,
                    std::vector<AgentMemory>& memory, int threads) {
    const int n = sc.n_agents;
    if (static_cast<int>(world.size()) != n) throw InputError("world size does not match n_agents");
    if (static_cast<int>(memory.size()) != n) memory.assign(n, AgentMemory{});
    StepOutput out;
    out.controls.assign(n, Vec());
    out.stats.assign(n, AgentStepRecord{});

    if (controller == Controller::centralized) {
        centralized_step(world, sc, memory, out);
        return out;
    }

    const AdjacencyMatrix adj = topology_for(sc, world);
    std::vector<std::exception_ptr> errors(n);
    parallel_for(n, threads, [&](int i) {
        try {
            out.stats[i] = solve_one(sc, world, i, adj, controller, memory[i], out.controls[i]);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    });
    for (int i = 0; i < n; ++i) {
        if (!errors[i]) continue;
        std::string msg = "agent " + std::to_string(i) + ": ";
        try {
            std::rethrow_exception(errors[i]);
        } catch (const std::exception& e) {
            msg += e.what();
        }
        throw StepError(msg, out.stats);
    }
    return out;
}

TrajectoryLog run_closed_loop(const ScenarioConfig& sc, Controller controller, int threads) {
    sc.validate();
    const auto t0 = std::chrono::steady_clock::now();
    TrajectoryLog log;
    log.n_agents = sc.n_agents;
    log.n_p = sc.horizon.n_p;
    log.dt = sc.horizon.dt;
    log.controller = controller;

    std::vector<Vec> world = sc.starts;
    if (sc.start_jitter > 0.0) {
        std::mt19937_64 rng(sc.seed);
        std::uniform_real_distribution<double> u(-sc.start_jitter, sc.start_jitter);
        for (auto& x : world)
            for (int k = 0; k < sc.horizon.n_p; ++k) x(k) += u(rng);
    }
    std::vector<AgentMemory> memory(sc.n_agents);
    log.snapshots.push_back(world);
    for (int step = 0; step < sc.steps; ++step) {
        bool home = true;
        for (int i = 0; i < sc.n_agents; ++i)
            home = home && (sc.position(world[i]) - sc.position(sc.goals[i])).norm() <= sc.goal_tolerance;
        if (home) {
            log.reached_goals = true;
            break;
        }
        StepOutput out;
        try {
            out = mpc_step(world, sc, controller, memory, threads);
        } catch (const StepError& e) {
            log.aborted = "step " + std::to_string(step) + ": " + e.what();
            break;
        }
        for (int i = 0; i < sc.n_agents; ++i) {
            out.stats[i].step = step;
            world[i] = step_dynamics(world[i], out.controls[i], agent_model(sc, world[i]));
            log.records.push_back(std::move(out.stats[i]));
        }
        log.snapshots.push_back(world);
        log.steps_run = step + 1;
    }
    if (!log.reached_goals) {
        bool home = true;
        for (int i = 0; i < sc.n_agents; ++i)
            home = home && (sc.position(world[i]) - sc.position(sc.goals[i])).norm() <= sc.goal_tolerance;
        log.reached_goals = home;
    }
    log.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return log;
}

double min_pairwise_distance(const std::vector<Vec>& positions) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < positions.size(); ++i)
        for (std::size_t j = i + 1; j < positions.size(); ++j)
            best = std::min(best, (positions[i] - positions[j]).norm());
    return best;
}

std::vector<double> min_pairwise_distance(const TrajectoryLog& log) {
    std::vector<double> out;
    out.reserve(log.snapshots.size());
    for (const auto& snap : log.snapshots) {
        std::vector<Vec> pos;
        for (const auto& x : snap) pos.push_back(x.head(log.n_p));
        out.push_back(min_pairwise_distance(pos));
    }
    return out;
}

}  // namespace hadmm
