#include "hadmm/checks.hpp"

#include "hadmm/agent_dynamics.hpp"
#include "hadmm/inner_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace hadmm {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

Vec gaussian(std::mt19937_64& rng, int n, double sigma) {
    std::normal_distribution<double> nd(0.0, sigma);
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = nd(rng);
    return v;
}

Eigen::Vector3d unit_vector(std::mt19937_64& rng) {
    Eigen::Vector3d d = gaussian(rng, 3, 1.0);
    while (d.norm() < 1e-6) d = gaussian(rng, 3, 1.0);
    return d.normalized();
}

}  // namespace

AgentProblem random_agent_problem(std::mt19937_64& rng, int T, int r, bool quadrotor) {
    const double dt = 0.05;
    HorizonSpec spec = quadrotor ? HorizonSpec{T, 4, 12, 3, dt} : HorizonSpec{T, 3, 6, 3, dt};
    const int n = spec.n, m = spec.m;

    Vec x0 = Vec::Zero(n);
    x0.head(3) = gaussian(rng, 3, 1.0);
    x0.segment(3, 3) = gaussian(rng, 3, 0.3);
    DiscreteModel model;
    if (quadrotor) {
        x0.segment(6, 3) = gaussian(rng, 3, 0.15);
        x0.segment(9, 3) = gaussian(rng, 3, 0.3);
        model = discretize(sdc_linearize(x0, QuadrotorParams{}), dt);
    } else {
        model = double_integrator(3, dt);
    }

    Weights w;
    w.q = Vec::Zero(n);
    for (int k = 0; k < n; ++k) w.q(k) = k < 3 ? uniform(rng, 0.5, 2.0) : uniform(rng, 0.0, 0.1);
    w.r = Vec::Zero(m);
    for (int k = 0; k < m; ++k) w.r(k) = uniform(rng, 0.0, 0.1);
    w.q_T = w.q;

    std::vector<Vec> x_ref;
    for (int t = 0; t < T; ++t) {
        Vec x = Vec::Zero(n);
        x.head(3) = x0.head(3) + gaussian(rng, 3, 0.5);
        x_ref.push_back(x);
    }

    const double u_max = quadrotor ? 1.96 : 5.0;
    Bounds b{Vec::Constant(m, -u_max), Vec::Constant(m, u_max), Vec::Constant(n, -100.0), Vec::Constant(n, 100.0)};

    Vec nb(3 * r);
    for (int j = 0; j < r; ++j) nb.segment(3 * j, 3) = x0.head(3) + uniform(rng, 0.6, 1.5) * unit_vector(rng);
    return make_agent_problem(spec, model, x0, w, x_ref, b, nb, 0.2, 10.0);
}

Vec random_interior_point(std::mt19937_64& rng, const AgentProblem& prob) {
    const HorizonSpec& sp = prob.spec;
    const int bl = sp.block();
    const double u_max = prob.f_z(0);
    const Vec u = gaussian(rng, sp.T * sp.m, 0.3 * u_max).cwiseMax(-0.9 * u_max).cwiseMin(0.9 * u_max);
    // Row block t of G reads -A x(t) - B u(t) + x(t+1) = g_t, so with x(t+1)
    // still zero the rollout is x(t+1) = g_t - G_t z.
    Vec z = Vec::Zero(sp.decision_dim());
    for (int t = 0; t < sp.T; ++t) {
        z.segment(t * bl, sp.m) = u.segment(t * sp.m, sp.m);
        z.segment(t * bl + sp.m, sp.n) = prob.g.segment(t * sp.n, sp.n) - prob.G.middleRows(t * sp.n, sp.n) * z;
    }
    return repair_interior(z, prob, 0.05);
}

InnerState random_inner_state(std::mt19937_64& rng, const AgentProblem& prob, const Vec& z) {
    InnerState st;
    st.z = z;
    const int N = prob.spec.decision_dim();
    Vec Fz(2 * N);
    Fz << z, -z;
    st.z_f = (prob.f_z - Fz).cwiseMax(0.0) + gaussian(rng, 2 * N, 0.05).cwiseAbs();
    st.s = gaussian(rng, prob.spec.constraint_dim(), 0.1);
    st.y = gaussian(rng, prob.spec.constraint_dim(), 1.0);
    return st;
}

CheckReport check_gradient(std::uint64_t seed, int trials, double tol) {
    std::mt19937_64 rng(seed);
    CheckReport rep;
    rep.name = "gradient";
    for (int t = 0; t < trials; ++t) {
        const AgentProblem prob = random_agent_problem(rng, uniform_int(rng, 1, 5), uniform_int(rng, 0, 3), t % 2 == 0);
        const Vec z = random_interior_point(rng, prob);
        const InnerState st = random_inner_state(rng, prob, z);
        const double rho = log_uniform(rng, 0.5, 20.0);
        const double b = log_uniform(rng, 1e-3, 1.0);
        const BarrierObjective obj(prob, st, rho, b, t % 3 == 0);
        const Vec g = obj.gradient(z);
        Vec fd(z.size());
        for (int k = 0; k < z.size(); ++k) {
            const double h = 1e-5 * std::max(1.0, std::abs(z(k)));
            Vec zp = z, zm = z;
            zp(k) += h;
            zm(k) -= h;
            fd(k) = (obj.value(zp) - obj.value(zm)) / (2.0 * h);
        }
        const double err = (fd - g).lpNorm<Eigen::Infinity>() / std::max(g.lpNorm<Eigen::Infinity>(), 1e-12);
        rep.worst = std::max(rep.worst, err);
        ++rep.trials;
    }
    rep.passed = rep.worst <= tol;
    rep.detail = "max relative error";
    return rep;
}

CheckReport check_projections(std::uint64_t seed, int trials, int competitors) {
    std::mt19937_64 rng(seed);
    CheckReport rep;
    rep.name = "projections";
    long failures = 0;
    double worst_gap = 0.0;
    for (int t = 0; t < trials; ++t) {
        const int n = uniform_int(rng, 1, 40);
        Vec v = gaussian(rng, n, log_uniform(rng, 1e-3, 1e3));
        if (t % 7 == 0) v(uniform_int(rng, 0, n - 1)) = 0.0;

        const Vec p = project_nonneg(v);
        for (int i = 0; i < n; ++i)
            if (p(i) != (v(i) > 0.0 ? v(i) : 0.0)) ++failures;
        if (project_nonneg(p) != p) ++failures;

        Vec lo(n), hi(n);
        for (int i = 0; i < n; ++i) {
            const double a = uniform(rng, -2.0, 2.0), w = uniform(rng, 1e-6, 3.0);
            lo(i) = a;
            hi(i) = a + w;
        }
        const Vec q = project_box(v, lo, hi);
        for (int i = 0; i < n; ++i) {
            const double want = v(i) < lo(i) ? lo(i) : (v(i) > hi(i) ? hi(i) : v(i));
            if (q(i) != want) ++failures;
        }
        if (project_box(q, lo, hi) != q) ++failures;

        const Vec c = project_box(v, -0.01, 0.01);
        for (int i = 0; i < n; ++i)
            if (c(i) != std::clamp(v(i), -0.01, 0.01)) ++failures;
        if (project_box(c, -0.01, 0.01) != c) ++failures;

        const double dq = (v - q).norm();
        for (int k = 0; k < competitors; ++k) {
            Vec w(n);
            for (int i = 0; i < n; ++i) w(i) = uniform(rng, lo(i), hi(i));
            const double gap = dq - (v - w).norm();
            if (gap > 0.0) {
                ++failures;
                worst_gap = std::max(worst_gap, gap);
            }
        }
        ++rep.trials;
    }
    rep.worst = static_cast<double>(failures);
    rep.passed = failures == 0;
    char buf[96];
    std::snprintf(buf, sizeof buf, "rule violations (largest nearest-point gap %.3g)", worst_gap);
    rep.detail = buf;
    return rep;
}

CheckReport check_descent(std::uint64_t seed, double rho_factor, int fixtures, int passes, double slack) {
    CheckReport rep;
    rep.name = "descent";
    if (rho_factor < std::sqrt(2.0)) {
        rep.skipped = true;
        rep.passed = true;
        rep.detail = "precondition rho >= sqrt(2) beta violated (rho_factor " + std::to_string(rho_factor) +
                     "), descent not asserted";
        return rep;
    }
    std::mt19937_64 rng(seed);
    SolverConfig cfg;
    cfg.rho_factor = rho_factor;
    const HierarchicalZSolver zs(cfg);
    rep.worst = -std::numeric_limits<double>::infinity();
    for (int f = 0; f < fixtures; ++f) {
        const AgentProblem prob = random_agent_problem(rng, uniform_int(rng, 2, 5), uniform_int(rng, 1, 3), f % 2 == 0);
        const Vec z = random_interior_point(rng, prob);
        InnerState st = random_inner_state(rng, prob, z);
        OuterState out;
        out.beta = log_uniform(rng, 0.1, 10.0);
        out.rho = rho_factor * out.beta;
        out.lambda = project_box(gaussian(rng, prob.spec.constraint_dim(), 0.01), cfg.lambda_lo, cfg.lambda_hi);
        out.tol = cfg.tol0;
        out.barrier = cfg.barrier.b0;
        out.eps4 = cfg.inexact.eps4_0;
        st.y = -out.lambda - out.beta * st.s;
        double L = augmented_lagrangian(prob, st, out.lambda, out.beta, out.rho);
        for (int p = 0; p < passes; ++p) {
            InnerPass pass = inner_iteration(st, prob, out, zs);
            const double L_next = augmented_lagrangian(prob, pass.state, out.lambda, out.beta, out.rho);
            rep.worst = std::max(rep.worst, L_next - L);
            L = L_next;
            st = std::move(pass.state);
        }
        ++rep.trials;
    }
    rep.passed = rep.worst <= slack;
    rep.detail = "largest increase of the augmented Lagrangian over one pass";
    return rep;
}

std::string format_report(const CheckReport& r) {
    char buf[256];
    if (r.skipped) {
        std::snprintf(buf, sizeof buf, "%s: SKIPPED (%s)", r.name.c_str(), r.detail.c_str());
    } else {
        std::snprintf(buf, sizeof buf, "%s: %s  worst %.3e  trials %d  (%s)", r.name.c_str(),
                      r.passed ? "PASS" : "FAIL", r.worst, r.trials, r.detail.c_str());
    }
    return buf;
}

}  // namespace hadmm
