#include "hadmm/admm_solver.hpp"

#include "hadmm/coupling.hpp"
#include "hadmm/inner_solver.hpp"

#include <cmath>
#include <limits>

namespace hadmm {

Vec project_nonneg(const Vec& v) { return v.cwiseMax(0.0); }

Vec project_box(const Vec& v, const Vec& lo, const Vec& hi) {
    if (lo.size() != v.size() || hi.size() != v.size()) throw InputError("box bounds have the wrong dimension");
    if (!(lo.array() < hi.array()).all()) throw InputError("box bounds are crossed");
    Vec out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (v(i) < lo(i)) out(i) = lo(i);
        else if (v(i) > hi(i)) out(i) = hi(i);
        else out(i) = v(i);
    }
    return out;
}

Vec project_box(const Vec& v, double lo, double hi) {
    return project_box(v, Vec::Constant(v.size(), lo), Vec::Constant(v.size(), hi));
}

Vec constraint_residual(const AgentProblem& prob, const Vec& z, const Vec& z_f) {
    return prob.apply_A(z) + prob.apply_B(z_f) - prob.h_cal;
}

Vec update_zf(const InnerState& st, const AgentProblem& prob, double rho) {
    if (!(rho > 0.0)) throw ConfigError("rho must be positive");
    // B^T B = I, so alpha = rho and the proximal weight vanishes
    const Vec w = prob.apply_A(st.z) + st.s - prob.h_cal + st.y / rho;
    return project_nonneg(-prob.apply_Bt(w));
}

Vec update_s(const InnerState& st, const AgentProblem& prob, double rho, double beta, const Vec& lambda) {
    if (!(rho + beta > 0.0)) throw ConfigError("rho + beta must be positive");
    const Vec w = constraint_residual(prob, st.z, st.z_f) + st.y / rho;
    return -rho / (rho + beta) * w - lambda / (rho + beta);
}

Vec update_y(const InnerState& st, const AgentProblem& prob, double rho) {
    return st.y + rho * (constraint_residual(prob, st.z, st.z_f) + st.s);
}

bool in_coupling_set(const AgentProblem& prob, const Vec& z) {
    if (prob.r == 0) return true;
    const Vec h = CouplingEvaluator(NeighborSnapshot::from(prob), prob.spec).values(z);
    const double lo = prob.d_safe * prob.d_safe, hi = prob.d_cmu * prob.d_cmu;
    return (h.array() >= lo).all() && (h.array() <= hi).all();
}

double augmented_lagrangian(const AgentProblem& prob, const InnerState& st, const Vec& lambda, double beta,
                            double rho) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if ((st.z_f.array() < 0.0).any()) return inf;
    if (!in_coupling_set(prob, st.z)) return inf;
    const Vec res = constraint_residual(prob, st.z, st.z_f) + st.s;
    return prob.cost(st.z) + lambda.dot(st.s) + 0.5 * beta * st.s.squaredNorm() + st.y.dot(res) +
           0.5 * rho * res.squaredNorm();
}

InnerPass inner_iteration(const InnerState& state, const AgentProblem& prob, const OuterState& outer,
                          const ZSolver& z_solver) {
    const double rho = outer.rho;
    InnerPass pass;
    InnerState& nx = pass.state;
    nx = state;
    ZStep zs = z_solver.solve(prob, state, outer);
    nx.z = std::move(zs.z);
    pass.z_iterations = zs.iterations;
    nx.z_f = update_zf(nx, prob, rho);
    nx.s = update_s(nx, prob, rho, outer.beta, outer.lambda);
    nx.y = update_y(nx, prob, rho);

    const Vec dzf = state.z_f - nx.z_f;
    const Vec ds = state.s - nx.s;
    const Vec eq = constraint_residual(prob, nx.z, nx.z_f);
    ResidualReport& r = pass.res;
    r.r1 = rho * prob.apply_At(prob.apply_B(dzf) + ds).norm();
    r.r2 = rho * prob.apply_Bt(ds).norm();
    r.r3 = (eq + nx.s).norm();
    r.constraint_norm = eq.norm();
    r.aug_lagrangian = augmented_lagrangian(prob, nx, outer.lambda, outer.beta, rho);
    return pass;
}

OuterState outer_update(const OuterState& outer, const Vec& s_k, const SolverConfig& cfg) {
    OuterState nx = outer;
    const double s_norm = s_k.norm();
    nx.lambda = project_box(outer.lambda + outer.beta * s_k, cfg.lambda_lo, cfg.lambda_hi);
    if (s_norm > cfg.omega * outer.s_norm_prev) nx.beta = cfg.gamma * outer.beta;
    nx.rho = cfg.rho_factor * nx.beta;
    nx.k = outer.k + 1;
    const ScheduleValues sv = tolerance_schedule(nx.k, cfg);
    nx.tol = sv.tol;
    nx.eps4 = sv.eps4;
    nx.barrier = sv.barrier;
    nx.s_norm_prev = s_norm;
    return nx;
}

SolverStart cold_start(const AgentProblem& prob, const Vec& z0, const SolverConfig& cfg) {
    if (z0.size() != prob.spec.decision_dim()) throw InputError("z0 has the wrong dimension");
    SolverStart st;
    st.state.z = z0;
    const Eigen::Index N = z0.size();
    Vec Fz(2 * N);
    Fz << z0, -z0;
    st.state.z_f = project_nonneg(prob.f_z - Fz);
    st.state.s = -constraint_residual(prob, st.state.z, st.state.z_f);
    st.lambda = Vec::Zero(prob.h_cal.size());
    st.beta = cfg.beta0;
    st.state.y = -st.lambda - st.beta * st.state.s;
    return st;
}

SolveResult solve_agent(const AgentProblem& prob, const SolverConfig& cfg, const ZSolver& z_solver,
                        const SolverStart& start) {
    cfg.validate();
    const int nc = static_cast<int>(prob.h_cal.size());
    if (start.state.z.size() != prob.spec.decision_dim() || start.state.z_f.size() != prob.spec.box_dim() ||
        start.state.s.size() != nc || start.lambda.size() != nc)
        throw InputError("solver start has the wrong dimensions");

    SolveResult out;
    InnerState& st = out.state;
    st = start.state;
    OuterState& outer = out.outer;
    outer.lambda = project_box(start.lambda, cfg.lambda_lo, cfg.lambda_hi);
    outer.beta = start.beta;
    outer.rho = cfg.rho_factor * outer.beta;
    outer.k = 0;
    const ScheduleValues sv = tolerance_schedule(0, cfg);
    outer.tol = sv.tol;
    outer.eps4 = sv.eps4;
    outer.barrier = sv.barrier;
    outer.s_norm_prev = st.s.norm();

    SolveStats& stats = out.stats;
    const Tolerances& term = cfg.tol_terminal;
    const bool improved = cfg.variant == Variant::improved;
    for (;;) {
        st.y = -outer.lambda - outer.beta * st.s;
        ResidualReport res;
        bool inner_done = false;
        for (int r = 0; r < cfg.max_inner && stats.inner_iterations < cfg.max_total_inner; ++r) {
            InnerPass pass = inner_iteration(st, prob, outer, z_solver);
            st = std::move(pass.state);
            res = pass.res;
            ++stats.inner_iterations;
            stats.z_iterations += pass.z_iterations;
            if (cfg.record_trace)
                stats.trace.push_back({outer.k, r, res, outer.beta, outer.rho, outer.barrier, pass.z_iterations});
            if (res.r1 <= outer.tol.e1 && res.r2 <= outer.tol.e2 && res.r3 <= outer.tol.e3) {
                inner_done = true;
                break;
            }
        }
        stats.outer_iterations = outer.k + 1;
        stats.final = res;
        const double s_norm = st.s.norm();
        const bool at_terminal = inner_done && res.r1 <= term.e1 && res.r2 <= term.e2 && res.r3 <= term.e3;
        if (at_terminal && s_norm <= cfg.slack_tol && (!improved || outer.barrier <= cfg.barrier.eps_b)) {
            stats.converged = true;
            break;
        }
        if (stats.inner_iterations >= cfg.max_total_inner || outer.k + 1 >= cfg.max_outer) break;
        const OuterState next = outer_update(outer, st.s, cfg);
        stats.outer_log.push_back({s_norm, outer.s_norm_prev, outer.beta, next.beta, next.lambda.minCoeff(),
                                   next.lambda.maxCoeff()});
        outer = next;
    }
    stats.cost = prob.cost(st.z);
    stats.s_norm = st.s.norm();
    return out;
}

}  // namespace hadmm
