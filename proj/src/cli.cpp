#include "hadmm/cli.hpp"

#include "hadmm/checks.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace hadmm {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Reads one JSON object, remembering which keys were consumed.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(where("") + "expected an object");
    }

    bool has(const std::string& k) const { return j_.contains(k); }

    void num(const std::string& k, double& v) {
        if (!take(k)) return;
        if (!j_[k].is_number()) throw ConfigError(where(k) + "expected a number");
        v = j_[k].get<double>();
    }

    void integer(const std::string& k, int& v) {
        if (!take(k)) return;
        if (!j_[k].is_number_integer()) throw ConfigError(where(k) + "expected an integer");
        v = j_[k].get<int>();
    }

    void u64(const std::string& k, std::uint64_t& v) {
        if (!take(k)) return;
        if (!j_[k].is_number_unsigned()) throw ConfigError(where(k) + "expected a nonnegative integer");
        v = j_[k].get<std::uint64_t>();
    }

    void boolean(const std::string& k, bool& v) {
        if (!take(k)) return;
        if (!j_[k].is_boolean()) throw ConfigError(where(k) + "expected true or false");
        v = j_[k].get<bool>();
    }

    void str(const std::string& k, std::string& v) {
        if (!take(k)) return;
        if (!j_[k].is_string()) throw ConfigError(where(k) + "expected a string");
        v = j_[k].get<std::string>();
    }

    void vec(const std::string& k, Vec& v) {
        if (!take(k)) return;
        v = to_vec(j_[k], where(k));
    }

    void vecs(const std::string& k, std::vector<Vec>& v) {
        if (!take(k)) return;
        if (!j_[k].is_array()) throw ConfigError(where(k) + "expected an array of arrays");
        v.clear();
        for (std::size_t i = 0; i < j_[k].size(); ++i)
            v.push_back(to_vec(j_[k][i], where(k + "[" + std::to_string(i) + "]")));
    }

    template <class F>
    void object(const std::string& k, F&& f) {
        if (!take(k)) return;
        Reader sub(j_[k], path_.empty() ? k : path_ + "." + k);
        f(sub);
        sub.finish();
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key()))
                throw ConfigError("unknown key '" + (path_.empty() ? it.key() : path_ + "." + it.key()) + "'");
    }

private:
    bool take(const std::string& k) {
        seen_.insert(k);
        return j_.contains(k);
    }

    std::string where(const std::string& k) const {
        std::string p = path_.empty() ? k : (k.empty() ? path_ : path_ + "." + k);
        return p.empty() ? "" : p + ": ";
    }

    static Vec to_vec(const json& a, const std::string& where) {
        if (!a.is_array()) throw ConfigError(where + "expected an array of numbers");
        Vec v(static_cast<int>(a.size()));
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (!a[i].is_number()) throw ConfigError(where + "expected an array of numbers");
            v(static_cast<int>(i)) = a[i].get<double>();
        }
        return v;
    }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

json to_json(const Vec& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

json to_json(const std::vector<Vec>& vs) {
    json a = json::array();
    for (const auto& v : vs) a.push_back(to_json(v));
    return a;
}

void read_tolerances(Reader& r, Tolerances& t) {
    r.num("e1", t.e1);
    r.num("e2", t.e2);
    r.num("e3", t.e3);
}

json tolerances_json(const Tolerances& t) { return {{"e1", t.e1}, {"e2", t.e2}, {"e3", t.e3}}; }

void read_solver(Reader& r, SolverConfig& c) {
    r.num("beta0", c.beta0);
    r.num("rho_factor", c.rho_factor);
    r.num("gamma", c.gamma);
    r.num("omega", c.omega);
    r.num("lambda_lo", c.lambda_lo);
    r.num("lambda_hi", c.lambda_hi);
    r.object("tol0", [&](Reader& s) { read_tolerances(s, c.tol0); });
    r.object("tol_terminal", [&](Reader& s) { read_tolerances(s, c.tol_terminal); });
    r.num("tol_divisor", c.tol_divisor);
    r.num("slack_tol", c.slack_tol);
    r.integer("max_inner", c.max_inner);
    r.integer("max_outer", c.max_outer);
    r.integer("max_total_inner", c.max_total_inner);
    r.object("barrier", [&](Reader& s) {
        s.num("b0", c.barrier.b0);
        s.num("decay", c.barrier.decay);
        s.num("eps_b", c.barrier.eps_b);
        s.boolean("include_upper", c.barrier.include_upper);
    });
    r.object("inexact", [&](Reader& s) {
        s.num("eps4_0", c.inexact.eps4_0);
        s.num("ratio", c.inexact.ratio);
        s.num("floor", c.inexact.floor);
    });
    r.object("bb", [&](Reader& s) {
        s.num("step_min", c.bb.step_min);
        s.num("step_max", c.bb.step_max);
        s.num("armijo", c.bb.armijo);
        s.integer("max_backtracks", c.bb.max_backtracks);
        s.integer("max_iter", c.bb.max_iter);
    });
}

json solver_json(const SolverConfig& c) {
    return {{"beta0", c.beta0},
            {"rho_factor", c.rho_factor},
            {"gamma", c.gamma},
            {"omega", c.omega},
            {"lambda_lo", c.lambda_lo},
            {"lambda_hi", c.lambda_hi},
            {"tol0", tolerances_json(c.tol0)},
            {"tol_terminal", tolerances_json(c.tol_terminal)},
            {"tol_divisor", c.tol_divisor},
            {"slack_tol", c.slack_tol},
            {"max_inner", c.max_inner},
            {"max_outer", c.max_outer},
            {"max_total_inner", c.max_total_inner},
            {"barrier",
             {{"b0", c.barrier.b0},
              {"decay", c.barrier.decay},
              {"eps_b", c.barrier.eps_b},
              {"include_upper", c.barrier.include_upper}}},
            {"inexact", {{"eps4_0", c.inexact.eps4_0}, {"ratio", c.inexact.ratio}, {"floor", c.inexact.floor}}},
            {"bb",
             {{"step_min", c.bb.step_min},
              {"step_max", c.bb.step_max},
              {"armijo", c.bb.armijo},
              {"max_backtracks", c.bb.max_backtracks},
              {"max_iter", c.bb.max_iter}}}};
}

Vec pad_state(const Vec& v, const HorizonSpec& h, const char* field) {
    if (v.size() == h.n) return v;
    if (v.size() == h.n_p) {
        Vec x = Vec::Zero(h.n);
        x.head(h.n_p) = v;
        return x;
    }
    throw ConfigError(std::string(field) + ": expected " + std::to_string(h.n_p) + " or " + std::to_string(h.n) +
                      " entries");
}

std::string model_name(ModelKind k) { return k == ModelKind::quadrotor ? "quadrotor" : "double_integrator"; }

}  // namespace

ScenarioConfig parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("scenario: malformed JSON: ") + e.what());
    }
    ScenarioConfig sc;
    Reader r(j, "");
    if (!r.has("n_agents")) throw ConfigError("n_agents ≥ 2 required");
    r.integer("n_agents", sc.n_agents);
    if (sc.n_agents < 2) throw ConfigError("n_agents ≥ 2 required");

    std::string model = "quadrotor";
    r.str("model", model);
    if (model == "quadrotor") {
        sc.model = ModelKind::quadrotor;
    } else if (model == "double_integrator") {
        sc.model = ModelKind::double_integrator;
        sc.horizon = HorizonSpec{25, 3, 6, 3, 0.05};
    } else {
        throw ConfigError("model: unknown value '" + model + "'");
    }
    r.object("quadrotor", [&](Reader& q) {
        q.num("mass", sc.quadrotor.mass);
        q.num("gravity", sc.quadrotor.gravity);
        Vec inertia;
        q.vec("inertia", inertia);
        if (inertia.size() > 0) {
            if (inertia.size() != 3) throw ConfigError("quadrotor.inertia: expected 3 entries");
            sc.quadrotor.inertia = inertia;
        }
        q.num("arm_length", sc.quadrotor.arm_length);
        q.num("yaw_coefficient", sc.quadrotor.yaw_coefficient);
    });
    r.object("horizon", [&](Reader& h) {
        h.integer("T", sc.horizon.T);
        h.integer("m", sc.horizon.m);
        h.integer("n", sc.horizon.n);
        h.integer("n_p", sc.horizon.n_p);
        h.num("dt", sc.horizon.dt);
    });
    sc.horizon.validate();

    if (!r.has("starts")) throw ConfigError("starts: required");
    if (!r.has("goals")) throw ConfigError("goals: required");
    r.vecs("starts", sc.starts);
    r.vecs("goals", sc.goals);
    for (auto& s : sc.starts) s = pad_state(s, sc.horizon, "starts");
    for (auto& g : sc.goals) g = pad_state(g, sc.horizon, "goals");

    r.num("d_safe", sc.d_safe);
    r.num("d_cmu", sc.d_cmu);
    r.num("safety_margin", sc.safety_margin);

    const int n = sc.horizon.n, m = sc.horizon.m;
    sc.weights.q = Vec::Zero(n);
    sc.weights.q.head(sc.horizon.n_p).setOnes();
    sc.weights.r = Vec::Zero(m);
    sc.weights.q_T = sc.weights.q;
    r.object("weights", [&](Reader& w) {
        w.vec("q", sc.weights.q);
        w.vec("r", sc.weights.r);
        if (w.has("q_terminal"))
            w.vec("q_terminal", sc.weights.q_T);
        else
            sc.weights.q_T = sc.weights.q;
    });

    sc.bounds.u_hi = Vec::Constant(m, 1.96);
    sc.bounds.x_hi = Vec::Constant(n, 100.0);
    r.object("bounds", [&](Reader& b) {
        b.vec("u_hi", sc.bounds.u_hi);
        b.vec("x_hi", sc.bounds.x_hi);
        sc.bounds.u_lo = -sc.bounds.u_hi;
        sc.bounds.x_lo = -sc.bounds.x_hi;
        b.vec("u_lo", sc.bounds.u_lo);
        b.vec("x_lo", sc.bounds.x_lo);
    });
    if (sc.bounds.u_lo.size() == 0) sc.bounds.u_lo = -sc.bounds.u_hi;
    if (sc.bounds.x_lo.size() == 0) sc.bounds.x_lo = -sc.bounds.x_hi;

    r.object("solver", [&](Reader& s) { read_solver(s, sc.solver); });
    r.integer("steps", sc.steps);

    std::string topo = "upper_triangular";
    r.str("topology", topo);
    if (topo == "upper_triangular")
        sc.topology = TopologyMode::upper_triangular;
    else if (topo == "distance")
        sc.topology = TopologyMode::distance;
    else
        throw ConfigError("topology: unknown value '" + topo + "'");

    std::string ref = "interpolated";
    r.str("reference", ref);
    if (ref == "interpolated")
        sc.reference = ReferenceMode::interpolated;
    else if (ref == "constant_goal")
        sc.reference = ReferenceMode::constant_goal;
    else
        throw ConfigError("reference: unknown value '" + ref + "'");

    r.num("reference_speed", sc.reference_speed);
    r.num("goal_tolerance", sc.goal_tolerance);
    r.boolean("warm_start_multipliers", sc.warm_start_multipliers);
    r.num("start_jitter", sc.start_jitter);
    r.u64("seed", sc.seed);
    r.finish();

    sc.validate();
    return sc;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("scenario: cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::string dump_scenario(const ScenarioConfig& sc) {
    json j;
    j["n_agents"] = sc.n_agents;
    j["model"] = model_name(sc.model);
    if (sc.model == ModelKind::quadrotor)
        j["quadrotor"] = {{"mass", sc.quadrotor.mass},
                          {"gravity", sc.quadrotor.gravity},
                          {"inertia", to_json(Vec(sc.quadrotor.inertia))},
                          {"arm_length", sc.quadrotor.arm_length},
                          {"yaw_coefficient", sc.quadrotor.yaw_coefficient}};
    j["horizon"] = {{"T", sc.horizon.T},
                    {"m", sc.horizon.m},
                    {"n", sc.horizon.n},
                    {"n_p", sc.horizon.n_p},
                    {"dt", sc.horizon.dt}};
    j["starts"] = to_json(sc.starts);
    j["goals"] = to_json(sc.goals);
    j["d_safe"] = sc.d_safe;
    j["d_cmu"] = sc.d_cmu;
    j["safety_margin"] = sc.safety_margin;
    j["weights"] = {{"q", to_json(sc.weights.q)}, {"r", to_json(sc.weights.r)}, {"q_terminal", to_json(sc.weights.q_T)}};
    j["bounds"] = {{"u_lo", to_json(sc.bounds.u_lo)},
                   {"u_hi", to_json(sc.bounds.u_hi)},
                   {"x_lo", to_json(sc.bounds.x_lo)},
                   {"x_hi", to_json(sc.bounds.x_hi)}};
    j["solver"] = solver_json(sc.solver);
    j["steps"] = sc.steps;
    j["topology"] = sc.topology == TopologyMode::upper_triangular ? "upper_triangular" : "distance";
    j["reference"] = sc.reference == ReferenceMode::interpolated ? "interpolated" : "constant_goal";
    j["reference_speed"] = sc.reference_speed;
    j["goal_tolerance"] = sc.goal_tolerance;
    j["warm_start_multipliers"] = sc.warm_start_multipliers;
    j["start_jitter"] = sc.start_jitter;
    j["seed"] = sc.seed;
    return j.dump(2) + "\n";
}

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

VariantReport summarize(const TrajectoryLog& log) {
    VariantReport rep;
    rep.variant = to_string(log.controller);
    rep.agent_steps = static_cast<int>(log.records.size());
    int converged = 0;
    for (const auto& r : log.records) {
        rep.total_inner += r.inner_iterations;
        rep.total_outer += r.outer_iterations;
        rep.total_cost += r.cost;
        converged += r.converged;
    }
    if (rep.agent_steps > 0) {
        rep.avg_inner = static_cast<double>(rep.total_inner) / rep.agent_steps;
        rep.avg_outer = static_cast<double>(rep.total_outer) / rep.agent_steps;
        rep.converged_fraction = static_cast<double>(converged) / rep.agent_steps;
    }
    if (rep.total_outer > 0) rep.avg_inner_per_outer = static_cast<double>(rep.total_inner) / rep.total_outer;
    if (log.steps_run > 0) {
        for (int i = 0; i < log.n_agents; ++i) {
            const auto& r = log.records[static_cast<std::size_t>((log.steps_run - 1) * log.n_agents + i)];
            rep.final_eq_residual = std::max(rep.final_eq_residual, r.residuals.constraint_norm);
            rep.r1 = std::max(rep.r1, r.residuals.r1);
            rep.r2 = std::max(rep.r2, r.residuals.r2);
            rep.r3 = std::max(rep.r3, r.residuals.r3);
            rep.s_norm = std::max(rep.s_norm, r.s_norm);
        }
    }
    const auto md = min_pairwise_distance(log);
    rep.min_distance = md.empty() ? 0.0 : *std::min_element(md.begin(), md.end());
    rep.wall_time_s = log.wall_time_s;
    rep.reached_goals = log.reached_goals;
    return rep;
}

void write_trajectory_csv(std::ostream& os, const TrajectoryLog& log) {
    os << "step,time_s,agent_id,px,py,pz,vx,vy,vz,phi,theta,psi,wx,wy,wz,u1,u2,u3,u4\n";
    for (const auto& r : log.records) {
        // double-integrator states and inputs are padded into the quadrotor columns
        Vec x = Vec::Zero(12), u = Vec::Zero(4);
        const int np = log.n_p;
        if (r.state.size() == 12) {
            x = r.state;
        } else {
            x.head(np) = r.state.head(np);
            x.segment(3, np) = r.state.segment(np, np);
        }
        u.head(std::min<int>(4, static_cast<int>(r.control.size()))) = r.control.head(std::min<int>(4, static_cast<int>(r.control.size())));
        os << r.step << ',' << fmt_num(r.step * log.dt) << ',' << r.agent;
        for (int k = 0; k < 12; ++k) os << ',' << fmt_num(x(k));
        for (int k = 0; k < 4; ++k) os << ',' << fmt_num(u(k));
        os << '\n';
    }
}

void write_distances_csv(std::ostream& os, const TrajectoryLog& log) {
    os << "step,pair_i,pair_j,distance_m\n";
    for (std::size_t s = 0; s < log.snapshots.size(); ++s) {
        const auto& w = log.snapshots[s];
        for (std::size_t i = 0; i < w.size(); ++i)
            for (std::size_t j = i + 1; j < w.size(); ++j)
                os << s << ',' << i << ',' << j << ','
                   << fmt_num((w[i].head(log.n_p) - w[j].head(log.n_p)).norm()) << '\n';
    }
}

namespace {

json report_row(const VariantReport& r) {
    return {{"variant", r.variant},
            {"agent_steps", r.agent_steps},
            {"avg_outer_iterations", r.avg_outer},
            {"avg_inner_iterations", r.avg_inner},
            {"avg_inner_per_outer", r.avg_inner_per_outer},
            {"total_inner_iterations", r.total_inner},
            {"total_outer_iterations", r.total_outer},
            {"final_eq_residual", r.final_eq_residual},
            {"total_cost", r.total_cost},
            {"wall_time_s", r.wall_time_s},
            {"stopping", {{"r1", r.r1}, {"r2", r.r2}, {"r3", r.r3}, {"s_norm", r.s_norm}}},
            {"converged_fraction", r.converged_fraction},
            {"min_distance_m", r.min_distance},
            {"reached_goals", r.reached_goals}};
}

}  // namespace

std::string metrics_json(const TrajectoryLog& log, const VariantReport& rep) {
    json j = report_row(rep);
    json steps = json::array();
    for (int s = 0; s < log.steps_run; ++s) {
        long in = 0, out = 0, z = 0;
        double eq = 0.0, sn = 0.0;
        int conv = 0;
        for (int i = 0; i < log.n_agents; ++i) {
            const auto& r = log.records[static_cast<std::size_t>(s * log.n_agents + i)];
            in += r.inner_iterations;
            out += r.outer_iterations;
            z += r.z_iterations;
            eq = std::max(eq, r.residuals.constraint_norm);
            sn = std::max(sn, r.s_norm);
            conv += r.converged;
        }
        steps.push_back({{"step", s},
                         {"outer_iterations", out},
                         {"inner_iterations", in},
                         {"z_iterations", z},
                         {"max_eq_residual", eq},
                         {"max_s_norm", sn},
                         {"converged_agents", conv}});
    }
    j["n_agents"] = log.n_agents;
    j["steps_run"] = log.steps_run;
    j["aborted"] = log.aborted.empty() ? json(nullptr) : json(log.aborted);
    j["per_step"] = steps;
    return j.dump(2) + "\n";
}

std::string report_json(const RunReport& rep) {
    json rows = json::array();
    for (const auto& r : rep.rows) rows.push_back(report_row(r));
    return json{{"rows", rows}}.dump(2) + "\n";
}

std::string report_table(const RunReport& rep) {
    std::ostringstream os;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-13s %9s %9s %11s %12s %13s %10s %10s %9s\n", "variant", "avg_outer", "avg_inner",
                  "inner/outer", "eq_residual", "total_cost", "s_norm", "min_dist", "time_s");
    os << buf;
    for (const auto& r : rep.rows) {
        std::snprintf(buf, sizeof buf, "%-13s %9.3f %9.3f %11.3f %12.3e %13.6g %10.3e %10.4f %9.2f\n",
                      r.variant.c_str(), r.avg_outer, r.avg_inner, r.avg_inner_per_outer, r.final_eq_residual,
                      r.total_cost, r.s_norm, r.min_distance, r.wall_time_s);
        os << buf;
    }
    return os.str();
}

namespace {

void apply_overrides(ScenarioConfig& sc, const std::optional<std::uint64_t>& seed, const std::optional<int>& steps) {
    if (seed) sc.seed = *seed;
    if (steps) sc.steps = *steps;
    sc.validate();
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw InputError("cannot write '" + p.string() + "'");
    f << text;
}

TrajectoryLog run_variant(const ScenarioConfig& sc, Controller c) {
    return run_closed_loop(sc, c, worker_count(sc.n_agents));
}

}  // namespace

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
    try {
        ScenarioConfig sc = load_scenario(a.scenario);
        apply_overrides(sc, a.seed, a.steps);
        const Controller c = parse_controller(a.variant);
        fs::create_directories(a.out);
        const TrajectoryLog log = run_variant(sc, c);
        const VariantReport rep = summarize(log);
        std::ostringstream traj, dist;
        write_trajectory_csv(traj, log);
        write_distances_csv(dist, log);
        write_file(fs::path(a.out) / "trajectory.csv", traj.str());
        write_file(fs::path(a.out) / "distances.csv", dist.str());
        write_file(fs::path(a.out) / "metrics.json", metrics_json(log, rep));
        out << report_table(RunReport{{rep}});
        if (!log.aborted.empty()) {
            err << "warning: run stopped early at " << log.aborted << '\n';
            return 1;
        }
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

int cmd_compare(const CompareArgs& a, std::ostream& out, std::ostream& err) {
    try {
        ScenarioConfig sc = load_scenario(a.scenario);
        apply_overrides(sc, a.seed, a.steps);
        if (a.variants.empty()) throw ConfigError("variants: at least one variant required");
        std::vector<Controller> cs;
        for (const auto& v : a.variants) cs.push_back(parse_controller(v));
        for (Controller c : cs)
            if (c == Controller::centralized && sc.n_agents > 4 && !a.force_centralized)
                throw ConfigError("variants: centralized limited to 4 agents (use --force-centralized)");
        RunReport rep;
        bool complete = true;
        for (Controller c : cs) {
            const TrajectoryLog log = run_variant(sc, c);
            if (!log.aborted.empty()) {
                err << "warning: " << to_string(c) << " stopped early at " << log.aborted << '\n';
                complete = false;
            }
            rep.rows.push_back(summarize(log));
        }
        fs::create_directories(a.out);
        write_file(fs::path(a.out) / "report.json", report_json(rep));
        const std::string table = report_table(rep);
        write_file(fs::path(a.out) / "report.txt", table);
        out << table;
        return complete ? 0 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

int cmd_check(const CheckArgs& a, std::ostream& out, std::ostream& err) {
    CheckReport rep;
    try {
        if (a.suite == "gradient")
            rep = check_gradient(a.seed);
        else if (a.suite == "projections")
            rep = check_projections(a.seed);
        else if (a.suite == "descent")
            rep = check_descent(a.seed, a.rho_factor);
        else
            throw ConfigError("suite: expected gradient, projections or descent");
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    out << format_report(rep) << '\n';
    return rep.passed ? 0 : 1;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Distributed MPC with a three-block ADMM per agent"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* s = app.add_subcommand("simulate", "closed-loop run of one variant");
    s->add_option("--scenario", sim.scenario, "scenario JSON")->required();
    s->add_option("--variant", sim.variant, "hierarchical | improved | centralized");
    s->add_option("--out", sim.out, "output directory");
    s->add_option("--seed", sim.seed);
    s->add_option("--steps", sim.steps);

    CompareArgs cmp;
    std::string variants = "hierarchical,improved";
    auto* c = app.add_subcommand("compare", "run several variants on the same scenario");
    c->add_option("--scenario", cmp.scenario, "scenario JSON")->required();
    c->add_option("--variant,--variants", variants, "comma separated list");
    c->add_option("--out", cmp.out, "output directory");
    c->add_option("--seed", cmp.seed);
    c->add_option("--steps", cmp.steps);
    c->add_flag("--force-centralized", cmp.force_centralized);

    CheckArgs chk;
    auto* k = app.add_subcommand("check", "property self-checks");
    k->add_option("suite", chk.suite, "gradient | projections | descent")->required();
    k->add_option("--seed", chk.seed);
    k->add_option("--rho-factor", chk.rho_factor, "rho / beta for the descent suite");

    CLI11_PARSE(app, argc, argv);

    if (*s) return cmd_simulate(sim, std::cout, std::cerr);
    if (*c) {
        cmp.variants.clear();
        std::stringstream ss(variants);
        for (std::string v; std::getline(ss, v, ',');)
            if (!v.empty()) cmp.variants.push_back(v);
        return cmd_compare(cmp, std::cout, std::cerr);
    }
    return cmd_check(chk, std::cout, std::cerr);
}

}  // namespace hadmm
