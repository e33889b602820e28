#include "hadmm/agent_dynamics.hpp"

#include <cmath>
#include <numbers>

namespace hadmm {

namespace {

Eigen::Matrix3d skew(const Eigen::Vector3d& w) {
    Eigen::Matrix3d s;
    s << 0.0, -w.z(), w.y(),
         w.z(), 0.0, -w.x(),
         -w.y(), w.x(), 0.0;
    return s;
}

// sin(a)/a and (cos(a)-1)/a, continuous at 0.
double sinc(double a) {
    if (std::abs(a) < 1e-4) return 1.0 - a * a / 6.0;
    return std::sin(a) / a;
}

double cosc(double a) {
    if (std::abs(a) < 1e-4) return -a / 2.0 + a * a * a / 24.0;
    return (std::cos(a) - 1.0) / a;
}

void check_attitude(const Eigen::Vector3d& zeta) {
    if (!(std::abs(zeta.y()) < std::numbers::pi / 2.0))
        throw SingularAttitudeError("pitch angle must satisfy |theta| < pi/2");
}

}  // namespace

void QuadrotorParams::validate() const {
    if (!(mass > 0.0)) throw ConfigError("quadrotor.mass must be positive");
    if (!(gravity > 0.0)) throw ConfigError("quadrotor.gravity must be positive");
    if (!(inertia.minCoeff() > 0.0)) throw ConfigError("quadrotor.inertia entries must be positive");
    if (!(arm_length > 0.0)) throw ConfigError("quadrotor.arm_length must be positive");
    if (!(yaw_coefficient > 0.0)) throw ConfigError("quadrotor.yaw_coefficient must be positive");
}

Mat QuadrotorParams::input_matrix() const {
    const double l = arm_length / std::numbers::sqrt2;
    const double c = yaw_coefficient;
    Mat B = Mat::Zero(12, 4);
    // rotor positions (+l,+l), (-l,+l), (-l,-l), (+l,-l); spin +, -, +, -
    const double xs[4] = {l, -l, -l, l};
    const double ys[4] = {l, l, -l, -l};
    const double spin[4] = {1.0, -1.0, 1.0, -1.0};
    for (int k = 0; k < 4; ++k) {
        B(5, k) = 1.0 / mass;
        B(9, k) = ys[k] / inertia.x();
        B(10, k) = -xs[k] / inertia.y();
        B(11, k) = spin[k] * c / inertia.z();
    }
    return B;
}

Vec AgentState::pack() const {
    Vec x(kDim);
    x << p, v, zeta, omega;
    return x;
}

AgentState AgentState::unpack(const Vec& x) {
    if (x.size() != kDim) throw InputError("quadrotor state must have 12 entries");
    AgentState s;
    s.p = x.segment<3>(0);
    s.v = x.segment<3>(3);
    s.zeta = x.segment<3>(6);
    s.omega = x.segment<3>(9);
    return s;
}

Eigen::Matrix3d body_to_world(const Eigen::Vector3d& zeta) {
    const double cf = std::cos(zeta.x()), sf = std::sin(zeta.x());
    const double ct = std::cos(zeta.y()), st = std::sin(zeta.y());
    const double cp = std::cos(zeta.z()), sp = std::sin(zeta.z());
    Eigen::Matrix3d R;
    R << ct * cp, sf * st * cp - cf * sp, cf * st * cp + sf * sp,
         ct * sp, sf * st * sp + cf * cp, cf * st * sp - sf * cp,
         -st, sf * ct, cf * ct;
    return R;
}

Eigen::Matrix3d euler_rate_matrix(const Eigen::Vector3d& zeta) {
    check_attitude(zeta);
    const double cf = std::cos(zeta.x()), sf = std::sin(zeta.x());
    const double ct = std::cos(zeta.y()), tt = std::tan(zeta.y());
    Eigen::Matrix3d W;
    W << 1.0, sf * tt, cf * tt,
         0.0, cf, -sf,
         0.0, sf / ct, cf / ct;
    return W;
}

Vec quadrotor_rhs(const Vec& x, const Vec& u, const QuadrotorParams& params) {
    const AgentState s = AgentState::unpack(x);
    if (u.size() != 4) throw InputError("quadrotor input must have 4 entries");
    const Eigen::Matrix3d Rbw = body_to_world(s.zeta);
    const Eigen::Matrix3d J = params.inertia.asDiagonal();
    const Eigen::Vector3d e3 = Eigen::Vector3d::UnitZ();

    const Vec thrust = Vec::Constant(4, params.hover_thrust()) + u;
    const Vec forcing = params.input_matrix() * thrust;

    Vec dx(12);
    dx.segment<3>(0) = Rbw * s.v;
    // gravity expressed in the body frame
    dx.segment<3>(3) = -s.omega.cross(s.v) - params.gravity * Rbw.transpose() * e3;
    dx.segment<3>(6) = euler_rate_matrix(s.zeta) * s.omega;
    dx.segment<3>(9) = J.inverse() * (-s.omega.cross(J * s.omega));
    return dx + forcing;
}

ContinuousModel sdc_linearize(const Vec& x, const QuadrotorParams& params) {
    params.validate();
    const AgentState s = AgentState::unpack(x);
    check_attitude(s.zeta);
    const Eigen::Matrix3d J = params.inertia.asDiagonal();
    const double g = params.gravity;
    const double phi = s.zeta.x(), theta = s.zeta.y();

    ContinuousModel cm;
    cm.A_tilde = Mat::Zero(12, 12);
    cm.A_tilde.block<3, 3>(0, 3) = body_to_world(s.zeta);
    cm.A_tilde.block<3, 3>(3, 3) = -skew(s.omega);
    // R^T e3 - e3 = (-sin t, sin f cos t, cos f cos t - 1), written as C(zeta) zeta
    Eigen::Matrix3d C;
    C << 0.0, -sinc(theta), 0.0,
         sinc(phi) * std::cos(theta), 0.0, 0.0,
         cosc(phi) * std::cos(theta), cosc(theta), 0.0;
    cm.A_tilde.block<3, 3>(3, 6) = -g * C;
    cm.A_tilde.block<3, 3>(6, 9) = euler_rate_matrix(s.zeta);
    cm.A_tilde.block<3, 3>(9, 9) = -J.inverse() * skew(s.omega) * J;
    cm.B_tilde = params.input_matrix();
    cm.u_eq = Vec::Constant(4, params.hover_thrust());
    return cm;
}

DiscreteModel discretize(const ContinuousModel& model, double dt) {
    if (!(dt > 0.0)) throw InputError("dt must be positive");
    if (model.A_tilde.rows() != model.A_tilde.cols() || model.B_tilde.rows() != model.A_tilde.rows())
        throw InputError("continuous model dimensions are inconsistent");
    DiscreteModel dm;
    const auto n = model.A_tilde.rows();
    dm.A = model.A_tilde * dt + Mat::Identity(n, n);
    dm.B = model.B_tilde * dt;
    dm.u_eq = model.u_eq.size() ? model.u_eq : Vec::Zero(model.B_tilde.cols());
    dm.dt = dt;
    return dm;
}

Vec step_dynamics(const Vec& x, const Vec& u, const DiscreteModel& model) {
    if (x.size() != model.n() || u.size() != model.m())
        throw InputError("state or input dimension does not match the model");
    return model.A * x + model.B * u;
}

DiscreteModel double_integrator(int n_p, double dt) {
    if (n_p < 1 || n_p > 3) throw InputError("double integrator needs 1 <= n_p <= 3");
    if (!(dt > 0.0)) throw InputError("dt must be positive");
    DiscreteModel dm;
    dm.A = Mat::Identity(2 * n_p, 2 * n_p);
    dm.A.topRightCorner(n_p, n_p) = dt * Mat::Identity(n_p, n_p);
    dm.B = Mat::Zero(2 * n_p, n_p);
    dm.B.topRows(n_p) = 0.5 * dt * dt * Mat::Identity(n_p, n_p);
    dm.B.bottomRows(n_p) = dt * Mat::Identity(n_p, n_p);
    dm.u_eq = Vec::Zero(n_p);
    dm.dt = dt;
    return dm;
}

}  // namespace hadmm
