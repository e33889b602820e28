#pragma once

#include "hadmm/qp_assembly.hpp"
#include "hadmm/types.hpp"

#include <vector>

namespace hadmm {

struct NeighborSnapshot {
    Vec positions;  // r * n_p, concatenated p_j(t)
    int r = 0;

    static NeighborSnapshot from(const AgentProblem& prob) { return {prob.neighbor_positions, prob.r}; }
};

// Constraint (tau, j) lives at index tau * r + j.
Vec eval_sqdist(const Vec& z, const NeighborSnapshot& snap, const Mat& M_p, const HorizonSpec& spec);

Mat coupling_jacobian(const Vec& z, const NeighborSnapshot& snap, const Mat& M_p, const HorizonSpec& spec);

struct FeasibilityReport {
    std::vector<bool> satisfied;
    double worst_violation = 0.0;  // m^2
    bool all() const;
};

FeasibilityReport feasibility_check(const Vec& z, const NeighborSnapshot& snap, double d_safe, double d_cmu,
                                    const HorizonSpec& spec);

// Evaluates h and J^T w without forming the Jacobian. Positions are read
// straight out of z at the offsets that M_p selects.
class CouplingEvaluator {
public:
    CouplingEvaluator(const NeighborSnapshot& snap, const HorizonSpec& spec);

    int count() const { return spec_.T * snap_.r; }
    Vec values(const Vec& z) const;
    // sum_theta w_theta * grad h_theta(z)
    Vec jacobian_transpose(const Vec& z, const Vec& w) const;

private:
    NeighborSnapshot snap_;
    HorizonSpec spec_;
};

}  // namespace hadmm
