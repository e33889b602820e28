#pragma once

#include "hadmm/qp_assembly.hpp"
#include "hadmm/solver_config.hpp"
#include "hadmm/types.hpp"

#include <vector>

namespace hadmm {

struct InnerState {
    Vec z;    // T(m+n)
    Vec z_f;  // 2T(m+n), box slack
    Vec s;    // T(2m+3n), relaxation slack
    Vec y;    // T(2m+3n)
};

struct OuterState {
    Vec lambda;
    double beta = 1.0;
    double rho = 1.5;
    int k = 0;
    Tolerances tol;
    double s_norm_prev = 0.0;
    double barrier = 0.1;  // b_k, used by the improved z-step
    double eps4 = 0.1;     // z-step gradient tolerance
};

struct ResidualReport {
    double r1 = 0.0;
    double r2 = 0.0;
    double r3 = 0.0;
    double aug_lagrangian = 0.0;
    double constraint_norm = 0.0;  // ||A z + B z_f - h||
};

struct ZStep {
    Vec z;
    int iterations = 0;
    double grad_norm = 0.0;
};

// Contract: the returned z does not increase the z-part of the augmented
// Lagrangian relative to state.z (up to solver tolerance).
class ZSolver {
public:
    virtual ~ZSolver() = default;
    virtual ZStep solve(const AgentProblem& prob, const InnerState& state, const OuterState& outer) const = 0;
};

struct TraceRecord {
    int outer = 0;
    int inner = 0;
    ResidualReport res;
    double beta = 0.0;
    double rho = 0.0;
    double barrier = 0.0;
    int z_iterations = 0;
};

// One entry per outer update, for auditing the beta/lambda law.
struct OuterRecord {
    double s_norm = 0.0;
    double s_norm_prev = 0.0;
    double beta_before = 0.0;
    double beta_after = 0.0;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
};

struct SolveStats {
    int outer_iterations = 0;
    int inner_iterations = 0;
    long z_iterations = 0;
    ResidualReport final;
    double cost = 0.0;
    double s_norm = 0.0;
    bool converged = false;
    std::vector<TraceRecord> trace;
    std::vector<OuterRecord> outer_log;
};

struct SolverStart {
    InnerState state;
    Vec lambda;
    double beta = 1.0;
};

struct SolveResult {
    InnerState state;
    OuterState outer;
    SolveStats stats;
};

Vec project_nonneg(const Vec& v);
Vec project_box(const Vec& v, const Vec& lo, const Vec& hi);
Vec project_box(const Vec& v, double lo, double hi);

Vec update_zf(const InnerState& state, const AgentProblem& prob, double rho);
Vec update_s(const InnerState& state, const AgentProblem& prob, double rho, double beta, const Vec& lambda);
Vec update_y(const InnerState& state, const AgentProblem& prob, double rho);

// A z + B z_f - h
Vec constraint_residual(const AgentProblem& prob, const Vec& z, const Vec& z_f);

// True when every coupling constraint of z lies in [d_safe^2, d_cmu^2].
bool in_coupling_set(const AgentProblem& prob, const Vec& z);

// L_rho including the indicators of Z_i and z_f >= 0 (+inf outside).
double augmented_lagrangian(const AgentProblem& prob, const InnerState& state, const Vec& lambda, double beta,
                            double rho);

struct InnerPass {
    InnerState state;
    ResidualReport res;
    int z_iterations = 0;
};

InnerPass inner_iteration(const InnerState& state, const AgentProblem& prob, const OuterState& outer,
                          const ZSolver& z_solver);

OuterState outer_update(const OuterState& outer, const Vec& s_k, const SolverConfig& cfg);

// z0 is taken as given; z_f is its box slack and s closes the residual.
SolverStart cold_start(const AgentProblem& prob, const Vec& z0, const SolverConfig& cfg);

SolveResult solve_agent(const AgentProblem& prob, const SolverConfig& cfg, const ZSolver& z_solver,
                        const SolverStart& start);

}  // namespace hadmm
