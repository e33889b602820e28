#include "hadmm/inner_solver.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace hadmm {

ScheduleValues tolerance_schedule(int k, const SolverConfig& cfg) {
    if (k < 0) throw InputError("outer index must be nonnegative");
    ScheduleValues v;
    Tolerances e = cfg.tol0;
    const Tolerances& f = cfg.tol_terminal;
    for (int i = 1; i <= k; ++i) {
        if (e.e1 <= f.e1 && e.e2 <= f.e2 && e.e3 <= f.e3) break;
        const double d = std::pow(cfg.tol_divisor, i - 1);
        e.e1 = std::max(e.e1 / d, f.e1);
        e.e2 = std::max(e.e2 / d, f.e2);
        e.e3 = std::max(e.e3 / d, f.e3);
    }
    v.tol = e;
    v.eps4 = std::max(cfg.inexact.eps4_0 * std::pow(cfg.inexact.ratio, k), cfg.inexact.floor);
    v.barrier = std::max(cfg.barrier.b0 * std::pow(cfg.barrier.decay, k), cfg.barrier.eps_b);
    return v;
}

BarrierObjective::BarrierObjective(const AgentProblem& prob, const InnerState& state, double rho, double b,
                                   bool include_upper)
    : prob_(prob), coupling_(NeighborSnapshot::from(prob), prob.spec), rho_(rho), b_(b), upper_(include_upper) {
    if (!(rho > 0.0)) throw ConfigError("rho must be positive");
    if (b < 0.0) throw ConfigError("barrier constant must be nonnegative");
    shift_ = prob.apply_B(state.z_f) + state.s - prob.h_cal + state.y / rho;
}

std::optional<Evaluation> BarrierObjective::evaluate(const Vec& z) const {
    Evaluation e;
    double barrier = 0.0;
    Vec weights;
    if (prob_.r > 0) {
        const Vec h = coupling_.values(z);
        const double lo = prob_.d_safe * prob_.d_safe, hi = prob_.d_cmu * prob_.d_cmu;
        weights.resize(h.size());
        for (Eigen::Index k = 0; k < h.size(); ++k) {
            const double gap = h(k) - lo;
            if (!(gap > 0.0)) return std::nullopt;
            barrier -= std::log(gap);
            weights(k) = -1.0 / gap;
            if (upper_) {
                const double up = hi - h(k);
                if (!(up > 0.0)) return std::nullopt;
                barrier -= std::log(up);
                weights(k) += 1.0 / up;
            }
        }
    }
    const Vec w = prob_.apply_A(z) + shift_;
    e.value = prob_.cost(z) + 0.5 * rho_ * w.squaredNorm() + b_ * barrier;
    e.gradient = prob_.cost_gradient(z) + rho_ * prob_.apply_At(w);
    if (prob_.r > 0 && b_ > 0.0) e.gradient += b_ * coupling_.jacobian_transpose(z, weights);
    return e;
}

bool BarrierObjective::interior(const Vec& z) const { return evaluate(z).has_value(); }

double BarrierObjective::value(const Vec& z) const {
    auto e = evaluate(z);
    if (!e) throw DomainError("barrier objective evaluated outside the interior");
    return e->value;
}

Vec BarrierObjective::gradient(const Vec& z) const {
    auto e = evaluate(z);
    if (!e) throw DomainError("barrier gradient evaluated outside the interior");
    return std::move(e->gradient);
}

double barrier_objective(const Vec& z, const AgentProblem& prob, const InnerState& state, double rho, double b,
                         bool include_upper) {
    return BarrierObjective(prob, state, rho, b, include_upper).value(z);
}

Vec barrier_gradient(const Vec& z, const AgentProblem& prob, const InnerState& state, double rho, double b,
                     bool include_upper) {
    return BarrierObjective(prob, state, rho, b, include_upper).gradient(z);
}

BBResult bb_minimize(const SmoothObjective& obj, const Vec& z0, double tol, int max_iter, const BBConfig& cfg) {
    if (!(tol > 0.0)) throw ConfigError("bb tolerance must be positive");
    auto e = obj.evaluate(z0);
    if (!e) throw DomainError("bb_minimize needs an interior starting point");
    BBResult res;
    res.z = z0;
    res.value = e->value;
    Vec g = std::move(e->gradient);
    double gn = g.norm();
    double alpha = std::clamp(1.0 / std::max(gn, 1e-300), cfg.step_min, 1.0);
    res.status = BBStatus::max_iterations;
    while (gn > tol && res.iterations < max_iter) {
        double t = std::clamp(alpha, cfg.step_min, cfg.step_max);
        const double gg = gn * gn;
        std::optional<Evaluation> trial;
        Vec zt;
        int bt = 0;
        for (; bt < cfg.max_backtracks; ++bt, t *= 0.5) {
            zt = res.z - t * g;
            trial = obj.evaluate(zt);
            // strict decrease too: near the optimum the Armijo margin drops
            // below one ulp of the value and a frozen step would pass
            if (trial && trial->value < res.value && trial->value <= res.value - cfg.armijo * t * gg) break;
            trial.reset();
        }
        if (!trial) {
            res.status = BBStatus::line_search_failed;
            break;
        }
        const Vec sk = zt - res.z;
        const Vec yk = trial->gradient - g;
        const double sty = sk.dot(yk);
        alpha = sty > 0.0 ? sk.squaredNorm() / sty : t;
        res.z = std::move(zt);
        res.value = trial->value;
        g = std::move(trial->gradient);
        gn = g.norm();
        ++res.iterations;
    }
    if (gn <= tol) res.status = BBStatus::converged;
    res.grad_norm = gn;
    return res;
}

Vec repair_interior(const Vec& z, const AgentProblem& prob, double margin) {
    Vec out = z;
    if (prob.r == 0) return out;
    if (!z.allFinite()) throw SolverError("warm start is not finite", out);
    const int np = prob.spec.n_p;
    const double target = prob.d_safe * prob.d_safe + margin;
    const double radius = std::sqrt(target) * (1.0 + 1e-9);
    auto violators = [&](const Vec& p) {
        std::vector<int> v;
        for (int j = 0; j < prob.r; ++j)
            if ((p - prob.neighbor_positions.segment(j * np, np)).squaredNorm() < target) v.push_back(j);
        return v;
    };
    for (int t = 0; t < prob.spec.T; ++t) {
        auto p = out.segment(prob.spec.position_offset(t), np);
        std::vector<int> bad = violators(p);
        if (bad.empty()) continue;
        if (bad.size() == 1) {
            // radial push off the single ball
            const Vec pj = prob.neighbor_positions.segment(bad[0] * np, np);
            Vec d = p - pj;
            const double len = d.norm();
            d = len > 1e-12 ? Vec(d / len) : Vec(Vec::Unit(np, 0));
            p = pj + radius * d;
            if (violators(p).empty()) continue;
        }
        // overlapping balls: walk away from their centroid until clear
        Vec c = Vec::Zero(np);
        for (int j : bad) c += prob.neighbor_positions.segment(j * np, np);
        c /= static_cast<double>(bad.size());
        Vec d = Vec(p) - c;
        if (d.norm() < 1e-12) d = Vec::Unit(np, 0);
        d.normalize();
        const Vec base = p;
        double step = radius;
        bool clear = false;
        for (int k = 0; k < 60 && !clear; ++k, step *= 1.5) {
            p = base + step * d;
            clear = violators(p).empty();
        }
        if (!clear) throw SolverError("could not push the warm start out of the safety balls", out);
    }
    return out;
}

namespace {

// z-part of L_rho, +inf outside Z_i
double z_merit(const AgentProblem& prob, const InnerState& state, const Vec& z, double rho) {
    if (!in_coupling_set(prob, z)) return std::numeric_limits<double>::infinity();
    const Vec w = prob.apply_A(z) + prob.apply_B(state.z_f) + state.s - prob.h_cal + state.y / rho;
    return prob.cost(z) + 0.5 * rho * w.squaredNorm();
}

Vec interior_start(const AgentProblem& prob, const Vec& z, const BarrierObjective& obj) {
    if (obj.interior(z)) return z;
    Vec out = repair_interior(z, prob);
    if (!obj.interior(out)) throw SolverError("repaired start is still outside the barrier domain", out);
    return out;
}

}  // namespace

ZStep solve_z_hierarchical(const AgentProblem& prob, const InnerState& state, double rho,
                           const SolverConfig& cfg) {
    const BarrierConfig& bc = cfg.barrier;
    ZStep step;
    Vec z;
    double b = bc.b0;
    for (;;) {
        const double stage = std::max(b, bc.eps_b);
        BarrierObjective obj(prob, state, rho, stage, bc.include_upper);
        if (z.size() == 0) z = interior_start(prob, state.z, obj);
        BBResult r = bb_minimize(obj, z, 10.0 * bc.eps_b, cfg.bb.max_iter, cfg.bb);
        z = std::move(r.z);
        step.iterations += r.iterations;
        step.grad_norm = r.grad_norm;
        if (stage <= bc.eps_b) break;
        b *= bc.decay;
    }
    // never accept an increase of L_rho in z
    if (z_merit(prob, state, z, rho) > z_merit(prob, state, state.z, rho)) {
        step.z = state.z;
        return step;
    }
    step.z = std::move(z);
    return step;
}

ZStep solve_z_improved(const AgentProblem& prob, const InnerState& state, double rho, double b_k,
                       double eps4_k, const SolverConfig& cfg) {
    if (!(b_k > 0.0)) throw ConfigError("barrier constant must be positive");
    BarrierObjective obj(prob, state, rho, b_k, cfg.barrier.include_upper);
    const Vec z0 = interior_start(prob, state.z, obj);
    BBResult r = bb_minimize(obj, z0, eps4_k, cfg.bb.max_iter, cfg.bb);
    return {std::move(r.z), r.iterations, r.grad_norm};
}

ZStep HierarchicalZSolver::solve(const AgentProblem& prob, const InnerState& state, const OuterState& outer) const {
    return solve_z_hierarchical(prob, state, outer.rho, cfg_);
}

ZStep ImprovedZSolver::solve(const AgentProblem& prob, const InnerState& state, const OuterState& outer) const {
    return solve_z_improved(prob, state, outer.rho, outer.barrier, outer.eps4, cfg_);
}

}  // namespace hadmm
