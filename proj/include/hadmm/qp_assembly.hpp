#pragma once

#include "hadmm/agent_dynamics.hpp"
#include "hadmm/types.hpp"

#include <vector>

namespace hadmm {

struct HorizonSpec {
    int T = 25;
    int m = 4;
    int n = 12;
    int n_p = 3;
    double dt = 0.05;

    void validate() const;
    int block() const { return m + n; }
    int decision_dim() const { return T * (m + n); }
    int box_dim() const { return 2 * T * (m + n); }
    int constraint_dim() const { return T * (2 * m + 3 * n); }
    // offset of p(t+tau+1) inside z
    int position_offset(int tau) const { return tau * (m + n) + m; }
};

struct CostTerms {
    Mat H;
    Vec z_ref;
};

struct DynamicsConstraints {
    Mat G;
    Vec g;
};

struct BoxConstraints {
    Mat F_z;
    Vec f_z;
};

struct StackedOperators {
    Mat A_cal;
    Mat B_cal;
    Vec h_cal;
};

struct Bounds {
    Vec u_lo, u_hi, x_lo, x_hi;
};

struct Weights {
    Vec q;    // diag(Q)
    Vec r;    // diag(R)
    Vec q_T;  // diag(Q_T)
};

// x_ref holds x_ref(t+1), ..., x_ref(t+T).
CostTerms build_cost(const Vec& q_diag, const Vec& r_diag, const Vec& qT_diag,
                     const std::vector<Vec>& x_ref, const HorizonSpec& spec);

DynamicsConstraints build_dynamics_constraints(const DiscreteModel& model, const Vec& x_init,
                                               const HorizonSpec& spec);

BoxConstraints build_bounds(const Vec& u_lo, const Vec& u_hi, const Vec& x_lo, const Vec& x_hi,
                            const HorizonSpec& spec);

StackedOperators assemble_stacked(const Mat& G, const Vec& g, const Mat& F_z, const Vec& f_z,
                                  const HorizonSpec& spec);

Mat position_selector(const HorizonSpec& spec);

// One agent's horizon problem. Built once per MPC step and read-only afterwards.
//
// The dense matrices are kept for inspection. The solver works through the
// apply_* members, which use the fixed block layout A = [G; I; -I], B = [0; I].
struct AgentProblem {
    HorizonSpec spec;
    Mat H;
    Vec z_ref;
    Mat G;
    Vec g;
    Mat F_z;
    Vec f_z;
    Mat A_cal;
    Mat B_cal;
    Vec h_cal;
    Mat M_p;
    Vec neighbor_positions;  // r * n_p, frozen p_j(t)
    int r = 0;
    double d_safe = 0.2;
    double d_cmu = 10.0;

    Vec h_diag;   // diagonal of H
    SpMat G_sp;

    Vec apply_A(const Vec& z) const;
    Vec apply_At(const Vec& v) const;
    Vec apply_B(const Vec& zf) const;
    Vec apply_Bt(const Vec& v) const;
    double cost(const Vec& z) const;  // (z - z_ref)^T H (z - z_ref)
    Vec cost_gradient(const Vec& z) const;
    // (A^T A) v
    Vec apply_AtA(const Vec& v) const;
};

AgentProblem make_agent_problem(const HorizonSpec& spec, const DiscreteModel& model, const Vec& x_init,
                                const Weights& weights, const std::vector<Vec>& x_ref,
                                const Bounds& bounds, const Vec& neighbor_positions, double d_safe,
                                double d_cmu);

// Rolls the model forward from x_init under the inputs in u (T blocks of m).
Vec rollout(const DiscreteModel& model, const Vec& x_init, const Vec& u, const HorizonSpec& spec);

}  // namespace hadmm
