#pragma once

#include "hadmm/types.hpp"

namespace hadmm {

// Rotor layout is an X configuration: rotor k sits at angle 45 + 90k degrees
// in the body x-y plane, spinning in alternating directions.
struct QuadrotorParams {
    double mass = 0.8;
    double gravity = 9.8;
    Eigen::Vector3d inertia{5e-3, 5e-3, 9e-3};
    double arm_length = 0.1;        // rotor distance from the center [m]
    double yaw_coefficient = 0.01;  // reaction torque per unit thrust [m]

    void validate() const;
    double hover_thrust() const { return mass * gravity / 4.0; }
    Mat input_matrix() const;  // B~, 12x4
};

// p (world), v (body), zeta = (phi, theta, psi) ZYX Euler angles, omega (body).
struct AgentState {
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    Eigen::Vector3d v = Eigen::Vector3d::Zero();
    Eigen::Vector3d zeta = Eigen::Vector3d::Zero();
    Eigen::Vector3d omega = Eigen::Vector3d::Zero();

    static constexpr int kDim = 12;
    Vec pack() const;
    static AgentState unpack(const Vec& x);
};

struct ContinuousModel {
    Mat A_tilde;
    Mat B_tilde;
    Vec u_eq;
};

// x+ = A x + B u, with u measured from the hover input u_eq.
struct DiscreteModel {
    Mat A;
    Mat B;
    Vec u_eq;
    double dt = 0.0;

    int n() const { return static_cast<int>(A.rows()); }
    int m() const { return static_cast<int>(B.cols()); }
};

// Body-to-world rotation for ZYX Euler angles.
Eigen::Matrix3d body_to_world(const Eigen::Vector3d& zeta);
// Maps body rates to Euler-angle rates.
Eigen::Matrix3d euler_rate_matrix(const Eigen::Vector3d& zeta);

// Full nonlinear right-hand side with the rotor thrusts u_eq + u.
Vec quadrotor_rhs(const Vec& x, const Vec& u, const QuadrotorParams& params);

// State-dependent coefficient form: x_dot = A~(x) x + B~ u holds exactly at x.
// The constant part of gravity is cancelled by the hover thrust B~ u_eq, so
// only the attitude-dependent part of gravity enters A~.
ContinuousModel sdc_linearize(const Vec& x, const QuadrotorParams& params);

DiscreteModel discretize(const ContinuousModel& model, double dt);

Vec step_dynamics(const Vec& x, const Vec& u, const DiscreteModel& model);

// Exact zero-order-hold double integrator: state (p, v), input acceleration.
DiscreteModel double_integrator(int n_p, double dt);

}  // namespace hadmm
