#pragma once

#include "hadmm/simulator.hpp"

#include <Eigen/Dense>

#include <random>

namespace fixtures {

using hadmm::Mat;
using hadmm::Vec;

inline Vec v2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

inline Vec randv(std::mt19937_64& rng, int n, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = u(rng);
    return v;
}

// Two planar double integrators, T = 3, dt = 0.1, far apart.
inline hadmm::ScenarioConfig toy_inactive() {
    return hadmm::double_integrator_scenario({v2(0, 0), v2(0, 5)}, {v2(1, 0), v2(1, 5)}, 3, 0.1);
}

// Same, but starting 0.21 m apart with references that run through each
// other, so the unconstrained optimum violates d_safe.
inline hadmm::ScenarioConfig toy_active() {
    auto sc = hadmm::double_integrator_scenario({v2(0, 0), v2(0.21, 0)}, {v2(1, 0), v2(-1, 0)}, 3, 0.1);
    sc.reference_speed = 5.0;
    return sc;
}

inline std::vector<hadmm::AgentProblem> toy_problems(const hadmm::ScenarioConfig& sc) {
    const auto adj = hadmm::upper_triangular_topology(sc.n_agents);
    std::vector<hadmm::AgentProblem> out;
    for (int i = 0; i < sc.n_agents; ++i) out.push_back(hadmm::build_problem(sc, sc.starts, i, adj));
    return out;
}

// min (z - z_ref)^T H (z - z_ref) s.t. G z = g, by a dense KKT solve.
inline Vec kkt_solution(const hadmm::AgentProblem& p) {
    const int N = static_cast<int>(p.z_ref.size()), m = static_cast<int>(p.g.size());
    Mat K = Mat::Zero(N + m, N + m);
    K.topLeftCorner(N, N) = 2.0 * p.H;
    K.topRightCorner(N, m) = p.G.transpose();
    K.bottomLeftCorner(m, N) = p.G;
    Vec rhs(N + m);
    rhs << 2.0 * p.H * p.z_ref, p.g;
    return K.fullPivLu().solve(rhs).head(N);
}

}  // namespace fixtures
