#include "hadmm/centralized_baseline.hpp"

#include "hadmm/inner_solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace hadmm {

int CentralizedProblem::constraint_count() const {
    int rows = 0;
    for (const auto& a : agents) rows += static_cast<int>(a.h_cal.size());
    return rows + coupling_rows();
}

namespace {

Mat block_diag(const std::vector<AgentProblem>& agents, Mat AgentProblem::*field) {
    Eigen::Index rows = 0, cols = 0;
    for (const auto& a : agents) {
        rows += (a.*field).rows();
        cols += (a.*field).cols();
    }
    Mat out = Mat::Zero(rows, cols);
    Eigen::Index r = 0, c = 0;
    for (const auto& a : agents) {
        const Mat& m = a.*field;
        out.block(r, c, m.rows(), m.cols()) = m;
        r += m.rows();
        c += m.cols();
    }
    return out;
}

// z = phi + Phi u, derived from G z = g alone.
struct Condensed {
    Mat Phi;
    Vec phi;
};

Condensed condense(const AgentProblem& p) {
    const HorizonSpec& h = p.spec;
    const int n = h.n, m = h.m, b = h.block();
    const Mat B = -p.G.block(0, 0, n, m);
    const Mat A = h.T > 1 ? Mat(-p.G.block(n, m, n, n)) : Mat::Identity(n, n);
    auto roll = [&](const Vec& u, bool affine) {
        Vec z(h.decision_dim());
        Vec x = affine ? Vec(p.g.head(n)) : Vec::Zero(n);
        for (int t = 0; t < h.T; ++t) {
            const Vec ut = u.segment(t * m, m);
            if (t > 0) x = A * x;
            x += B * ut;
            z.segment(t * b, m) = ut;
            z.segment(t * b + m, n) = x;
        }
        return z;
    };
    Condensed c;
    c.phi = roll(Vec::Zero(h.T * m), true);
    c.Phi.resize(h.decision_dim(), h.T * m);
    for (int k = 0; k < h.T * m; ++k) c.Phi.col(k) = roll(Vec::Unit(h.T * m, k), false);
    return c;
}

class JointBarrier : public SmoothObjective {
public:
    JointBarrier(const CentralizedProblem& cp, const std::vector<Condensed>& cond, double b)
        : cp_(cp), cond_(cond), b_(b) {}

    std::vector<Vec> expand(const Vec& u) const {
        const int nu = cp_.spec.T * cp_.spec.m;
        std::vector<Vec> z;
        for (std::size_t i = 0; i < cond_.size(); ++i)
            z.push_back(cond_[i].phi + cond_[i].Phi * u.segment(i * nu, nu));
        return z;
    }

    std::optional<Evaluation> evaluate(const Vec& u) const override {
        const HorizonSpec& h = cp_.spec;
        const int N = h.decision_dim(), np = h.n_p, nu = h.T * h.m;
        const std::vector<Vec> z = expand(u);
        std::vector<Vec> gz(z.size());
        double value = 0.0, barrier = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            const AgentProblem& a = cp_.agents[i];
            value += a.cost(z[i]);
            gz[i] = a.cost_gradient(z[i]);
            const Vec up = a.f_z.head(N) - z[i];
            const Vec lo = z[i] + a.f_z.tail(N);
            if ((up.array() <= 0.0).any() || (lo.array() <= 0.0).any()) return std::nullopt;
            barrier -= up.array().log().sum() + lo.array().log().sum();
            gz[i] += b_ * (up.cwiseInverse() - lo.cwiseInverse());
        }
        const double d2 = cp_.d_safe * cp_.d_safe;
        for (const auto& [i, j] : cp_.edges)
            for (int t = 0; t < h.T; ++t) {
                const int off = h.position_offset(t);
                const Vec d = z[i].segment(off, np) - z[j].segment(off, np);
                const double gap = d.squaredNorm() - d2;
                if (!(gap > 0.0)) return std::nullopt;
                barrier -= std::log(gap);
                gz[i].segment(off, np) -= b_ * 2.0 * d / gap;
                gz[j].segment(off, np) += b_ * 2.0 * d / gap;
            }
        Evaluation e;
        e.value = value + b_ * barrier;
        e.gradient.resize(u.size());
        for (std::size_t i = 0; i < z.size(); ++i) e.gradient.segment(i * nu, nu) = cond_[i].Phi.transpose() * gz[i];
        return e;
    }

private:
    const CentralizedProblem& cp_;
    const std::vector<Condensed>& cond_;
    double b_;
};

// Squared hinge on every barrier row, with a margin so that a zero value
// lands strictly inside the barrier domain.
class InteriorSearch : public SmoothObjective {
public:
    InteriorSearch(const CentralizedProblem& cp, const std::vector<Condensed>& cond, const JointBarrier& shape,
                   double margin)
        : cp_(cp), cond_(cond), shape_(shape), margin_(margin) {}

    std::optional<Evaluation> evaluate(const Vec& u) const override {
        const HorizonSpec& h = cp_.spec;
        const int N = h.decision_dim(), np = h.n_p, nu = h.T * h.m;
        const std::vector<Vec> z = shape_.expand(u);
        std::vector<Vec> gz(z.size());
        double value = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            const AgentProblem& a = cp_.agents[i];
            const Vec up = (margin_ - (a.f_z.head(N) - z[i]).array()).max(0.0).matrix();
            const Vec lo = (margin_ - (z[i] + a.f_z.tail(N)).array()).max(0.0).matrix();
            value += up.squaredNorm() + lo.squaredNorm();
            gz[i] = 2.0 * (up - lo);
        }
        const double d2 = cp_.d_safe * cp_.d_safe + margin_;
        for (const auto& [i, j] : cp_.edges)
            for (int t = 0; t < h.T; ++t) {
                const int off = h.position_offset(t);
                const Vec d = z[i].segment(off, np) - z[j].segment(off, np);
                const double v = d2 - d.squaredNorm();
                if (v <= 0.0) continue;
                value += v * v;
                gz[i].segment(off, np) -= 4.0 * v * d;
                gz[j].segment(off, np) += 4.0 * v * d;
            }
        Evaluation e;
        e.value = value;
        e.gradient.resize(u.size());
        for (std::size_t i = 0; i < z.size(); ++i) e.gradient.segment(i * nu, nu) = cond_[i].Phi.transpose() * gz[i];
        return e;
    }

private:
    const CentralizedProblem& cp_;
    const std::vector<Condensed>& cond_;
    const JointBarrier& shape_;
    double margin_;
};

}  // namespace

Mat CentralizedProblem::dense_H() const { return block_diag(agents, &AgentProblem::H); }
Mat CentralizedProblem::dense_G() const { return block_diag(agents, &AgentProblem::G); }
Mat CentralizedProblem::dense_F() const { return block_diag(agents, &AgentProblem::F_z); }

double CentralizedProblem::cost(const std::vector<Vec>& z) const {
    double c = 0.0;
    for (std::size_t i = 0; i < agents.size(); ++i) c += agents[i].cost(z[i]);
    return c;
}

Vec CentralizedProblem::coupling_values(const std::vector<Vec>& z) const {
    const int E = static_cast<int>(edges.size());
    Vec v(spec.T * E);
    for (int t = 0; t < spec.T; ++t) {
        const int off = spec.position_offset(t);
        for (int e = 0; e < E; ++e) {
            const auto [i, j] = edges[e];
            v(t * E + e) = (z[i].segment(off, spec.n_p) - z[j].segment(off, spec.n_p)).squaredNorm();
        }
    }
    return v;
}

CentralizedProblem assemble_centralized(const std::vector<AgentProblem>& problems, const AdjacencyMatrix& adj) {
    if (problems.empty()) throw InputError("assemble_centralized needs at least one agent");
    if (adj.n_agents() != static_cast<int>(problems.size()))
        throw InputError("topology size does not match the number of agents");
    CentralizedProblem cp;
    cp.spec = problems.front().spec;
    for (const auto& p : problems) {
        const HorizonSpec& s = p.spec;
        if (s.T != cp.spec.T || s.m != cp.spec.m || s.n != cp.spec.n || s.n_p != cp.spec.n_p || s.dt != cp.spec.dt)
            throw InputError("agents have mismatched horizon specs");
    }
    cp.agents = problems;
    cp.d_safe = problems.front().d_safe;
    cp.d_cmu = problems.front().d_cmu;
    const int n = adj.n_agents();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (adj(i, j) || adj(j, i)) cp.edges.emplace_back(i, j);
    return cp;
}

CentralizedResult solve_centralized(const CentralizedProblem& cp, double tol, const CentralizedOptions& opt,
                                    const std::vector<Vec>* u_warm) {
    if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");
    const int na = static_cast<int>(cp.agents.size());
    const int nu = cp.spec.T * cp.spec.m;
    std::vector<Condensed> cond;
    for (const auto& a : cp.agents) cond.push_back(condense(a));

    Vec u = Vec::Zero(na * nu);
    {
        JointBarrier probe(cp, cond, opt.b0);
        if (u_warm && static_cast<int>(u_warm->size()) == na) {
            Vec w(na * nu);
            for (int i = 0; i < na; ++i) w.segment(i * nu, nu) = (*u_warm)[i];
            if (probe.evaluate(w)) u = w;
        }
        if (!probe.evaluate(u)) {
            const InteriorSearch search(cp, cond, probe, 1e-3);
            BBResult r = bb_minimize(search, u, 1e-12, 5000, opt.bb);
            if (r.value > 0.0 || !probe.evaluate(r.z))
                throw SolverError("centralized solve has no interior starting point", r.z);
            u = std::move(r.z);
        }
    }

    CentralizedResult res;
    double b = opt.b0;
    for (;;) {
        const double stage = std::max(b, opt.b_final);
        JointBarrier obj(cp, cond, stage);
        BBResult r = bb_minimize(obj, u, tol, opt.bb.max_iter, opt.bb);
        u = std::move(r.z);
        res.iterations += r.iterations;
        res.grad_norm = r.grad_norm;
        ++res.stages;
        if (stage <= opt.b_final) {
            res.converged = r.status == BBStatus::converged;
            break;
        }
        b *= opt.decay;
    }
    res.z = JointBarrier(cp, cond, opt.b_final).expand(u);
    res.cost = cp.cost(res.z);
    for (int i = 0; i < na; ++i)
        res.dynamics_residual =
            std::max(res.dynamics_residual, (cp.agents[i].G * res.z[i] - cp.agents[i].g).norm());
    if (!cp.edges.empty()) {
        const Vec q = cp.coupling_values(res.z);
        res.min_distance = std::sqrt(q.minCoeff());
        res.worst_violation = std::max(0.0, cp.d_safe * cp.d_safe - q.minCoeff());
    } else {
        res.min_distance = std::numeric_limits<double>::infinity();
    }
    return res;
}

void centralized_step(const std::vector<Vec>& world, const ScenarioConfig& sc, std::vector<AgentMemory>& memory,
                      StepOutput& out) {
    const auto t0 = std::chrono::steady_clock::now();
    const int n = sc.n_agents;
    const HorizonSpec& h = sc.horizon;
    const AdjacencyMatrix adj = upper_triangular_topology(n);
    std::vector<AgentProblem> probs;
    for (int i = 0; i < n; ++i) probs.push_back(build_problem(sc, world, i, adj));
    const CentralizedProblem cp = assemble_centralized(probs, adj);

    std::vector<Vec> warm;
    bool have_warm = true;
    for (int i = 0; i < n; ++i) {
        if (!memory[i].valid) {
            have_warm = false;
            break;
        }
        const Vec z = shift_blocks(memory[i].state.z, h.T, {h.block()});
        Vec u(h.T * h.m);
        for (int t = 0; t < h.T; ++t) u.segment(t * h.m, h.m) = z.segment(t * h.block(), h.m);
        warm.push_back(u);
    }
    const CentralizedResult res = solve_centralized(cp, 1e-6, CentralizedOptions{}, have_warm ? &warm : nullptr);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (int i = 0; i < n; ++i) {
        memory[i].valid = true;
        memory[i].state.z = res.z[i];
        out.controls[i] = res.z[i].head(h.m).cwiseMax(sc.bounds.u_lo).cwiseMin(sc.bounds.u_hi);
        AgentStepRecord& rec = out.stats[i];
        rec.agent = i;
        rec.state = world[i];
        rec.control = out.controls[i];
        rec.cost = probs[i].cost(res.z[i]);
        rec.outer_iterations = res.stages;
        rec.inner_iterations = res.iterations;
        rec.z_iterations = res.iterations;
        rec.residuals.constraint_norm = (probs[i].G * res.z[i] - probs[i].g).norm();
        rec.converged = res.converged;
        rec.wall_time_s = wall / n;
    }
}

}  // namespace hadmm
