#include "hadmm/qp_assembly.hpp"

#include <string>

namespace hadmm {

namespace {

void check_diag(const Vec& d, int size, const char* name) {
    if (d.size() != size)
        throw InputError(std::string(name) + " has " + std::to_string(d.size()) + " entries, expected " +
                         std::to_string(size));
    if ((d.array() < 0.0).any()) throw InputError(std::string(name) + " has a negative weight");
}

}  // namespace

void HorizonSpec::validate() const {
    if (T < 1) throw InputError("horizon T must be >= 1");
    if (m < 1 || n < 1) throw InputError("m and n must be >= 1");
    if (n_p < 1 || n_p > n) throw InputError("n_p must lie in [1, n]");
    if (!(dt > 0.0)) throw InputError("dt must be positive");
}

CostTerms build_cost(const Vec& q_diag, const Vec& r_diag, const Vec& qT_diag,
                     const std::vector<Vec>& x_ref, const HorizonSpec& spec) {
    spec.validate();
    check_diag(q_diag, spec.n, "Q");
    check_diag(r_diag, spec.m, "R");
    check_diag(qT_diag, spec.n, "Q_T");
    if (static_cast<int>(x_ref.size()) != spec.T) throw InputError("x_ref must hold T states");

    const int N = spec.decision_dim(), b = spec.block();
    Vec diag(N);
    CostTerms c;
    c.z_ref = Vec::Zero(N);
    for (int t = 0; t < spec.T; ++t) {
        if (x_ref[t].size() != spec.n) throw InputError("x_ref state has the wrong dimension");
        diag.segment(t * b, spec.m) = r_diag;
        diag.segment(t * b + spec.m, spec.n) = (t + 1 == spec.T) ? qT_diag : q_diag;
        c.z_ref.segment(t * b + spec.m, spec.n) = x_ref[t];
    }
    c.H = diag.asDiagonal();
    return c;
}

DynamicsConstraints build_dynamics_constraints(const DiscreteModel& model, const Vec& x_init,
                                               const HorizonSpec& spec) {
    spec.validate();
    if (model.n() != spec.n || model.m() != spec.m || model.A.cols() != spec.n || model.B.rows() != spec.n)
        throw InputError("model dimensions do not match the horizon spec");
    if (x_init.size() != spec.n) throw InputError("x_init has the wrong dimension");

    const int n = spec.n, m = spec.m, b = spec.block();
    DynamicsConstraints d;
    d.G = Mat::Zero(spec.T * n, spec.decision_dim());
    d.g = Vec::Zero(spec.T * n);
    for (int t = 0; t < spec.T; ++t) {
        d.G.block(t * n, t * b, n, m) = -model.B;
        d.G.block(t * n, t * b + m, n, n) = Mat::Identity(n, n);
        if (t > 0) d.G.block(t * n, (t - 1) * b + m, n, n) = -model.A;
    }
    d.g.head(n) = model.A * x_init;
    return d;
}

BoxConstraints build_bounds(const Vec& u_lo, const Vec& u_hi, const Vec& x_lo, const Vec& x_hi,
                            const HorizonSpec& spec) {
    spec.validate();
    if (u_lo.size() != spec.m || u_hi.size() != spec.m || x_lo.size() != spec.n || x_hi.size() != spec.n)
        throw InputError("bound vectors have the wrong dimension");
    if (!(u_lo.array() < u_hi.array()).all()) throw InputError("input bounds are crossed");
    if (!(x_lo.array() < x_hi.array()).all()) throw InputError("state bounds are crossed");

    const int N = spec.decision_dim(), b = spec.block();
    BoxConstraints bc;
    bc.F_z.resize(2 * N, N);
    bc.F_z << Mat::Identity(N, N), -Mat::Identity(N, N);
    bc.f_z.resize(2 * N);
    for (int t = 0; t < spec.T; ++t) {
        bc.f_z.segment(t * b, spec.m) = u_hi;
        bc.f_z.segment(t * b + spec.m, spec.n) = x_hi;
        bc.f_z.segment(N + t * b, spec.m) = -u_lo;
        bc.f_z.segment(N + t * b + spec.m, spec.n) = -x_lo;
    }
    return bc;
}

StackedOperators assemble_stacked(const Mat& G, const Vec& g, const Mat& F_z, const Vec& f_z,
                                  const HorizonSpec& spec) {
    const int N = spec.decision_dim(), nb = spec.box_dim(), ng = spec.T * spec.n;
    if (G.rows() != ng || G.cols() != N || g.size() != ng || F_z.rows() != nb || F_z.cols() != N ||
        f_z.size() != nb)
        throw InputError("stacked blocks have inconsistent dimensions");
    StackedOperators s;
    s.A_cal.resize(ng + nb, N);
    s.A_cal << G, F_z;
    s.B_cal = Mat::Zero(ng + nb, nb);
    s.B_cal.bottomRows(nb).setIdentity();
    s.h_cal.resize(ng + nb);
    s.h_cal << g, f_z;
    return s;
}

Mat position_selector(const HorizonSpec& spec) {
    spec.validate();
    Mat M = Mat::Zero(spec.T * spec.n_p, spec.decision_dim());
    for (int t = 0; t < spec.T; ++t)
        M.block(t * spec.n_p, spec.position_offset(t), spec.n_p, spec.n_p).setIdentity();
    return M;
}

Vec AgentProblem::apply_A(const Vec& z) const {
    const int ng = static_cast<int>(g.size()), N = spec.decision_dim();
    Vec out(ng + 2 * N);
    out.head(ng) = G_sp * z;
    out.segment(ng, N) = z;
    out.tail(N) = -z;
    return out;
}

Vec AgentProblem::apply_At(const Vec& v) const {
    const int ng = static_cast<int>(g.size()), N = spec.decision_dim();
    return G_sp.transpose() * v.head(ng) + v.segment(ng, N) - v.tail(N);
}

Vec AgentProblem::apply_B(const Vec& zf) const {
    const int ng = static_cast<int>(g.size());
    Vec out(ng + zf.size());
    out.head(ng).setZero();
    out.tail(zf.size()) = zf;
    return out;
}

Vec AgentProblem::apply_Bt(const Vec& v) const { return v.tail(spec.box_dim()); }

double AgentProblem::cost(const Vec& z) const {
    const Vec d = z - z_ref;
    return d.dot(h_diag.cwiseProduct(d));
}

Vec AgentProblem::cost_gradient(const Vec& z) const { return 2.0 * h_diag.cwiseProduct(z - z_ref); }

Vec AgentProblem::apply_AtA(const Vec& v) const {
    return G_sp.transpose() * (G_sp * v) + 2.0 * v;
}

AgentProblem make_agent_problem(const HorizonSpec& spec, const DiscreteModel& model, const Vec& x_init,
                                const Weights& weights, const std::vector<Vec>& x_ref,
                                const Bounds& bounds, const Vec& neighbor_positions, double d_safe,
                                double d_cmu) {
    spec.validate();
    if (!(d_safe > 0.0) || !(d_cmu > d_safe)) throw InputError("need 0 < d_safe < d_cmu");
    if (neighbor_positions.size() % spec.n_p != 0)
        throw InputError("neighbor snapshot length is not a multiple of n_p");

    AgentProblem p;
    p.spec = spec;
    CostTerms c = build_cost(weights.q, weights.r, weights.q_T, x_ref, spec);
    p.H = std::move(c.H);
    p.z_ref = std::move(c.z_ref);
    p.h_diag = p.H.diagonal();
    DynamicsConstraints d = build_dynamics_constraints(model, x_init, spec);
    p.G = std::move(d.G);
    p.g = std::move(d.g);
    BoxConstraints bc = build_bounds(bounds.u_lo, bounds.u_hi, bounds.x_lo, bounds.x_hi, spec);
    p.F_z = std::move(bc.F_z);
    p.f_z = std::move(bc.f_z);
    StackedOperators s = assemble_stacked(p.G, p.g, p.F_z, p.f_z, spec);
    p.A_cal = std::move(s.A_cal);
    p.B_cal = std::move(s.B_cal);
    p.h_cal = std::move(s.h_cal);
    p.M_p = position_selector(spec);
    p.neighbor_positions = neighbor_positions;
    p.r = static_cast<int>(neighbor_positions.size() / spec.n_p);
    p.d_safe = d_safe;
    p.d_cmu = d_cmu;
    p.G_sp = p.G.sparseView();
    return p;
}

Vec rollout(const DiscreteModel& model, const Vec& x_init, const Vec& u, const HorizonSpec& spec) {
    if (u.size() != spec.T * spec.m) throw InputError("input sequence has the wrong length");
    Vec z(spec.decision_dim());
    Vec x = x_init;
    for (int t = 0; t < spec.T; ++t) {
        const Vec ut = u.segment(t * spec.m, spec.m);
        x = step_dynamics(x, ut, model);
        z.segment(t * spec.block(), spec.m) = ut;
        z.segment(t * spec.block() + spec.m, spec.n) = x;
    }
    return z;
}

}  // namespace hadmm
