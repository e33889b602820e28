#pragma once

#include "hadmm/qp_assembly.hpp"
#include "hadmm/simulator.hpp"
#include "hadmm/solver_config.hpp"
#include "hadmm/topology.hpp"

#include <utility>
#include <vector>

namespace hadmm {

// Joint problem over all agents. Coupling pairs use both agents' predicted
// positions at the same horizon index. Block matrices are kept per agent;
// the dense_* accessors assemble the block-diagonal forms on demand.
struct CentralizedProblem {
    std::vector<AgentProblem> agents;
    std::vector<std::pair<int, int>> edges;  // unordered, i < j
    HorizonSpec spec;
    double d_safe = 0.2;
    double d_cmu = 10.0;

    int dim() const { return static_cast<int>(agents.size()) * spec.decision_dim(); }
    int coupling_rows() const { return spec.T * static_cast<int>(edges.size()); }
    int constraint_count() const;
    Mat dense_H() const;
    Mat dense_G() const;
    Mat dense_F() const;
    double cost(const std::vector<Vec>& z) const;
    // squared distances, index tau * |E| + e
    Vec coupling_values(const std::vector<Vec>& z) const;
};

CentralizedProblem assemble_centralized(const std::vector<AgentProblem>& problems, const AdjacencyMatrix& adj);

struct CentralizedOptions {
    double b0 = 0.1;
    double decay = 0.1;
    double b_final = 1e-9;
    BBConfig bb{1e-10, 1e10, 1e-4, 60, 20000};
};

struct CentralizedResult {
    std::vector<Vec> z;  // per agent
    double cost = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
    int stages = 0;
    bool converged = false;
    double min_distance = 0.0;
    double worst_violation = 0.0;  // m^2
    double dynamics_residual = 0.0;
};

// Dynamics are eliminated by rolling out the inputs; boxes and couplings are
// handled by log barriers with continuation. u_warm (per agent, T*m) is used
// when its rollout is interior; otherwise zero inputs, pushed into the
// interior by a squared-hinge search when needed.
CentralizedResult solve_centralized(const CentralizedProblem& cp, double tol, const CentralizedOptions& opt = {},
                                    const std::vector<Vec>* u_warm = nullptr);

// Closed-loop step for the centralized controller.
void centralized_step(const std::vector<Vec>& world, const ScenarioConfig& sc, std::vector<AgentMemory>& memory,
                      StepOutput& out);

}  // namespace hadmm
