#include "hadmm/centralized_baseline.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace hadmm;

TEST(Assemble, BlockDiagonalAndEdges) {
    const auto sc = fixtures::toy_inactive();
    const auto probs = fixtures::toy_problems(sc);
    const auto cp = assemble_centralized(probs, upper_triangular_topology(2));
    const int N = probs[0].spec.decision_dim();
    EXPECT_EQ(cp.dim(), 2 * N);
    ASSERT_EQ(cp.edges.size(), 1u);
    EXPECT_EQ(cp.edges[0], std::make_pair(0, 1));
    EXPECT_EQ(cp.coupling_rows(), sc.horizon.T);
    EXPECT_EQ(cp.constraint_count(), static_cast<int>(probs[0].h_cal.size() + probs[1].h_cal.size()) + 3);
    const Mat H = cp.dense_H();
    EXPECT_EQ(H.topLeftCorner(N, N), probs[0].H);
    EXPECT_EQ(H.bottomRightCorner(N, N), probs[1].H);
    EXPECT_EQ(H.topRightCorner(N, N).norm(), 0.0);
    EXPECT_EQ(cp.dense_G().bottomRightCorner(probs[1].G.rows(), N), probs[1].G);
    EXPECT_EQ(cp.dense_F().rows(), 4 * N);
}

TEST(Assemble, CostAndCouplingLoops) {
    std::mt19937_64 rng(1);
    const auto sc = fixtures::toy_active();
    const auto probs = fixtures::toy_problems(sc);
    const auto cp = assemble_centralized(probs, upper_triangular_topology(2));
    const int N = cp.spec.decision_dim();
    const std::vector<Vec> z{fixtures::randv(rng, N), fixtures::randv(rng, N)};
    EXPECT_NEAR(cp.cost(z), probs[0].cost(z[0]) + probs[1].cost(z[1]), 1e-12);
    const Vec q = cp.coupling_values(z);
    for (int t = 0; t < cp.spec.T; ++t) {
        const int o = cp.spec.position_offset(t);
        const double dx = z[0](o) - z[1](o), dy = z[0](o + 1) - z[1](o + 1);
        EXPECT_NEAR(q(t), dx * dx + dy * dy, 1e-14);
    }
}

TEST(Assemble, RejectsMismatch) {
    const auto probs = fixtures::toy_problems(fixtures::toy_inactive());
    EXPECT_THROW(assemble_centralized(probs, upper_triangular_topology(3)), InputError);
    EXPECT_THROW(assemble_centralized({}, upper_triangular_topology(2)), InputError);
    auto other = double_integrator_scenario({fixtures::v2(0, 0), fixtures::v2(0, 5)},
                                                      {fixtures::v2(1, 0), fixtures::v2(1, 5)}, 4, 0.1);
    auto mixed = probs;
    mixed[1] = fixtures::toy_problems(other)[1];
    EXPECT_THROW(assemble_centralized(mixed, upper_triangular_topology(2)), InputError);
}

TEST(Solve, InactiveCouplingSplitsIntoAgentKkt) {
    const auto probs = fixtures::toy_problems(fixtures::toy_inactive());
    const auto cp = assemble_centralized(probs, upper_triangular_topology(2));
    const auto res = solve_centralized(cp, 1e-8);
    EXPECT_TRUE(res.converged);
    for (int i = 0; i < 2; ++i) EXPECT_LE((res.z[i] - fixtures::kkt_solution(probs[i])).norm(), 1e-5);
    EXPECT_LE(res.dynamics_residual, 1e-10);
    EXPECT_EQ(res.worst_violation, 0.0);
    EXPECT_NEAR(res.cost, cp.cost({fixtures::kkt_solution(probs[0]), fixtures::kkt_solution(probs[1])}), 1e-6);
}

TEST(Solve, ActiveCouplingKeepsSeparation) {
    const auto probs = fixtures::toy_problems(fixtures::toy_active());
    const auto cp = assemble_centralized(probs, upper_triangular_topology(2));
    const auto res = solve_centralized(cp, 1e-8);
    EXPECT_GE(res.min_distance, cp.d_safe);
    EXPECT_EQ(res.worst_violation, 0.0);
    EXPECT_LE(res.dynamics_residual, 1e-10);
    // the constraint binds, so the unconstrained optimum is cheaper
    const double free_cost = cp.cost({fixtures::kkt_solution(probs[0]), fixtures::kkt_solution(probs[1])});
    EXPECT_GE(res.cost, free_cost - 1e-9);
    const Vec q = cp.coupling_values({fixtures::kkt_solution(probs[0]), fixtures::kkt_solution(probs[1])});
    EXPECT_LT(q.minCoeff(), cp.d_safe * cp.d_safe);
}

TEST(Solve, WarmStartGivesSameOptimum) {
    const auto probs = fixtures::toy_problems(fixtures::toy_active());
    const auto cp = assemble_centralized(probs, upper_triangular_topology(2));
    const auto cold = solve_centralized(cp, 1e-8);
    std::vector<Vec> warm;
    for (const auto& z : cold.z) {
        Vec u(cp.spec.T * cp.spec.m);
        for (int t = 0; t < cp.spec.T; ++t) u.segment(t * cp.spec.m, cp.spec.m) = z.segment(t * cp.spec.block(), cp.spec.m);
        warm.push_back(u);
    }
    const auto hot = solve_centralized(cp, 1e-8, CentralizedOptions{}, &warm);
    EXPECT_NEAR(hot.cost, cold.cost, 1e-6 * std::max(1.0, cold.cost));
    EXPECT_THROW(solve_centralized(cp, 0.0), ConfigError);
}

TEST(Step, ClosedLoopControlsRespectBounds) {
    const auto sc = fixtures::toy_active();
    std::vector<AgentMemory> mem;
    const auto out = mpc_step(sc.starts, sc, Controller::centralized, mem);
    ASSERT_EQ(out.controls.size(), 2u);
    for (const auto& u : out.controls) {
        EXPECT_TRUE((u.array() <= sc.bounds.u_hi.array()).all());
        EXPECT_TRUE((u.array() >= sc.bounds.u_lo.array()).all());
    }
    EXPECT_TRUE(mem[0].valid && mem[1].valid);
    EXPECT_LE(out.stats[0].residuals.constraint_norm, 1e-9);
}

TEST(Solve, FindsInteriorStartWhenCoastingCollides) {
    auto sc = double_integrator_scenario({fixtures::v2(0, 0), fixtures::v2(0.3, 0)},
                                         {fixtures::v2(1, 0), fixtures::v2(-1, 0)}, 3, 0.1);
    sc.starts[0](2) = 0.5;  // closing at 1 m/s
    sc.starts[1](2) = -0.5;
    const auto probs = fixtures::toy_problems(sc);
    const auto cp = assemble_centralized(probs, upper_triangular_topology(2));
    const auto model = double_integrator(2, 0.1);
    const std::vector<Vec> coast{rollout(model, sc.starts[0], Vec::Zero(6), sc.horizon),
                                 rollout(model, sc.starts[1], Vec::Zero(6), sc.horizon)};
    ASSERT_LT(cp.coupling_values(coast).minCoeff(), cp.d_safe * cp.d_safe);
    const auto res = solve_centralized(cp, 1e-8);
    EXPECT_GE(res.min_distance, cp.d_safe);
    EXPECT_LE(res.dynamics_residual, 1e-10);
}
