#pragma once

#include "hadmm/admm_solver.hpp"
#include "hadmm/coupling.hpp"
#include "hadmm/solver_config.hpp"

#include <optional>

namespace hadmm {

struct ScheduleValues {
    Tolerances tol;
    double eps4 = 0.0;
    double barrier = 0.0;
};

ScheduleValues tolerance_schedule(int k, const SolverConfig& cfg);

struct Evaluation {
    double value = 0.0;
    Vec gradient;
};

class SmoothObjective {
public:
    virtual ~SmoothObjective() = default;
    // nullopt outside the domain
    virtual std::optional<Evaluation> evaluate(const Vec& z) const = 0;
};

// z-part of the barrier augmented Lagrangian with (z_f, s, y) held fixed.
class BarrierObjective : public SmoothObjective {
public:
    BarrierObjective(const AgentProblem& prob, const InnerState& state, double rho, double b,
                     bool include_upper = false);

    std::optional<Evaluation> evaluate(const Vec& z) const override;
    double value(const Vec& z) const;  // throws DomainError off the interior
    Vec gradient(const Vec& z) const;
    bool interior(const Vec& z) const;

private:
    const AgentProblem& prob_;
    CouplingEvaluator coupling_;
    Vec shift_;  // B z_f + s - h + y / rho
    double rho_;
    double b_;
    bool upper_;
};

double barrier_objective(const Vec& z, const AgentProblem& prob, const InnerState& state, double rho, double b,
                         bool include_upper = false);
Vec barrier_gradient(const Vec& z, const AgentProblem& prob, const InnerState& state, double rho, double b,
                     bool include_upper = false);

enum class BBStatus { converged, max_iterations, line_search_failed };

struct BBResult {
    Vec z;
    double value = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
    BBStatus status = BBStatus::converged;
};

// Monotone Barzilai-Borwein descent. Throws DomainError if z0 is outside the
// domain. A failed line search keeps the last accepted iterate.
BBResult bb_minimize(const SmoothObjective& obj, const Vec& z0, double tol, int max_iter, const BBConfig& cfg);

// Pushes positions out of each neighbor's safety ball until every squared
// distance is at least d_safe^2 + margin. Throws SolverError if that fails.
Vec repair_interior(const Vec& z, const AgentProblem& prob, double margin = 1e-4);

ZStep solve_z_hierarchical(const AgentProblem& prob, const InnerState& state, double rho,
                           const SolverConfig& cfg);
ZStep solve_z_improved(const AgentProblem& prob, const InnerState& state, double rho, double b_k,
                       double eps4_k, const SolverConfig& cfg);

class HierarchicalZSolver : public ZSolver {
public:
    explicit HierarchicalZSolver(SolverConfig cfg) : cfg_(std::move(cfg)) {}
    ZStep solve(const AgentProblem& prob, const InnerState& state, const OuterState& outer) const override;

private:
    SolverConfig cfg_;
};

class ImprovedZSolver : public ZSolver {
public:
    explicit ImprovedZSolver(SolverConfig cfg) : cfg_(std::move(cfg)) {}
    ZStep solve(const AgentProblem& prob, const InnerState& state, const OuterState& outer) const override;

private:
    SolverConfig cfg_;
};

}  // namespace hadmm
