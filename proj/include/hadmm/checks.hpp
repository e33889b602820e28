#pragma once

#include "hadmm/admm_solver.hpp"
#include "hadmm/qp_assembly.hpp"

#include <cstdint>
#include <random>
#include <string>

namespace hadmm {

struct CheckReport {
    std::string name;
    bool passed = false;
    bool skipped = false;
    double worst = 0.0;
    int trials = 0;
    std::string detail;
};

// Small random agent problem: T horizon steps, r frozen neighbors placed away
// from the rest trajectory. Quadrotor or 3-D double integrator.
AgentProblem random_agent_problem(std::mt19937_64& rng, int T, int r, bool quadrotor);

// Rollout of small random inputs, moved clear of every neighbor ball.
Vec random_interior_point(std::mt19937_64& rng, const AgentProblem& prob);

// z_f near the box slack of z, random s and y.
InnerState random_inner_state(std::mt19937_64& rng, const AgentProblem& prob, const Vec& z);

// Central differences of the barrier objective against its analytic gradient.
CheckReport check_gradient(std::uint64_t seed, int trials = 100, double tol = 1e-5);

// Clamp rules, idempotence and the nearest-point property of box projection.
CheckReport check_projections(std::uint64_t seed, int trials = 10000, int competitors = 100);

// Augmented Lagrangian across full inner passes. Skipped (not asserted) when
// rho_factor < sqrt(2).
CheckReport check_descent(std::uint64_t seed, double rho_factor = 1.5, int fixtures = 50, int passes = 4,
                          double slack = 1e-8);

std::string format_report(const CheckReport& r);

}  // namespace hadmm
