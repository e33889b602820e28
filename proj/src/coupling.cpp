#include "hadmm/coupling.hpp"

#include <algorithm>

namespace hadmm {

namespace {

void check(const Vec& z, const NeighborSnapshot& snap, const HorizonSpec& spec) {
    if (z.size() != spec.decision_dim()) throw InputError("z has the wrong dimension");
    if (snap.r < 0 || snap.positions.size() != snap.r * spec.n_p)
        throw InputError("neighbor snapshot length must equal r * n_p");
}

// P(z): M_p z replicated r times, minus 1_T kron [p_j]
Vec replicated_offsets(const Vec& z, const NeighborSnapshot& snap, const Mat& M_p, const HorizonSpec& spec) {
    if (M_p.rows() != spec.T * spec.n_p || M_p.cols() != spec.decision_dim())
        throw InputError("M_p has the wrong shape");
    const Vec p = M_p * z;
    const int np = spec.n_p, r = snap.r;
    Vec P(spec.T * r * np);
    for (int t = 0; t < spec.T; ++t)
        for (int j = 0; j < r; ++j)
            P.segment((t * r + j) * np, np) = p.segment(t * np, np) - snap.positions.segment(j * np, np);
    return P;
}

}  // namespace

Vec eval_sqdist(const Vec& z, const NeighborSnapshot& snap, const Mat& M_p, const HorizonSpec& spec) {
    check(z, snap, spec);
    const Vec P = replicated_offsets(z, snap, M_p, spec);
    const int np = spec.n_p;
    Vec h(spec.T * snap.r);
    for (int k = 0; k < h.size(); ++k) h(k) = P.segment(k * np, np).squaredNorm();
    return h;
}

Mat coupling_jacobian(const Vec& z, const NeighborSnapshot& snap, const Mat& M_p, const HorizonSpec& spec) {
    check(z, snap, spec);
    const Vec P = replicated_offsets(z, snap, M_p, spec);
    const int np = spec.n_p, r = snap.r;
    Mat Jac(spec.T * r, spec.decision_dim());
    for (int t = 0; t < spec.T; ++t)
        for (int j = 0; j < r; ++j) {
            const int k = t * r + j;
            Jac.row(k) = 2.0 * P.segment(k * np, np).transpose() * M_p.middleRows(t * np, np);
        }
    return Jac;
}

bool FeasibilityReport::all() const {
    return std::all_of(satisfied.begin(), satisfied.end(), [](bool b) { return b; });
}

FeasibilityReport feasibility_check(const Vec& z, const NeighborSnapshot& snap, double d_safe, double d_cmu,
                                    const HorizonSpec& spec) {
    if (!(d_safe < d_cmu)) throw InputError("need d_safe < d_cmu");
    const Vec h = CouplingEvaluator(snap, spec).values(z);
    const double lo = d_safe * d_safe, hi = d_cmu * d_cmu;
    FeasibilityReport rep;
    rep.satisfied.resize(h.size());
    for (int k = 0; k < h.size(); ++k) {
        rep.satisfied[k] = h(k) >= lo && h(k) <= hi;
        rep.worst_violation = std::max({rep.worst_violation, lo - h(k), h(k) - hi});
    }
    return rep;
}

CouplingEvaluator::CouplingEvaluator(const NeighborSnapshot& snap, const HorizonSpec& spec)
    : snap_(snap), spec_(spec) {
    if (snap.r < 0 || snap.positions.size() != snap.r * spec.n_p)
        throw InputError("neighbor snapshot length must equal r * n_p");
}

Vec CouplingEvaluator::values(const Vec& z) const {
    if (z.size() != spec_.decision_dim()) throw InputError("z has the wrong dimension");
    const int np = spec_.n_p, r = snap_.r;
    Vec h(spec_.T * r);
    for (int t = 0; t < spec_.T; ++t) {
        const auto p = z.segment(spec_.position_offset(t), np);
        for (int j = 0; j < r; ++j) h(t * r + j) = (p - snap_.positions.segment(j * np, np)).squaredNorm();
    }
    return h;
}

Vec CouplingEvaluator::jacobian_transpose(const Vec& z, const Vec& w) const {
    if (w.size() != count()) throw InputError("weight vector has the wrong length");
    const int np = spec_.n_p, r = snap_.r;
    Vec out = Vec::Zero(spec_.decision_dim());
    for (int t = 0; t < spec_.T; ++t) {
        const int off = spec_.position_offset(t);
        const Vec p = z.segment(off, np);
        for (int j = 0; j < r; ++j)
            out.segment(off, np) += 2.0 * w(t * r + j) * (p - snap_.positions.segment(j * np, np));
    }
    return out;
}

}  // namespace hadmm
