#pragma once

#include <string>

namespace hadmm {

struct Tolerances {
    double e1 = 1e-2;
    double e2 = 1e-2;
    double e3 = 1e-1;
};

enum class Variant { hierarchical, improved };

std::string to_string(Variant v);
Variant parse_variant(const std::string& s);

struct BarrierConfig {
    double b0 = 0.1;
    double decay = 0.1;
    double eps_b = 1e-6;
    bool include_upper = false;

    void validate() const;
};

// eps4_k = max(eps4_0 * ratio^k, floor)
struct InexactnessSchedule {
    double eps4_0 = 0.1;
    double ratio = 0.5;
    double floor = 1e-8;

    void validate() const;
};

struct BBConfig {
    double step_min = 1e-10;
    double step_max = 1e10;
    double armijo = 1e-4;
    int max_backtracks = 60;
    int max_iter = 500;

    void validate() const;
};

struct SolverConfig {
    double beta0 = 1.0;
    double rho_factor = 1.5;
    double gamma = 1.1;
    double omega = 0.9;
    double lambda_lo = -0.01;
    double lambda_hi = 0.01;
    Tolerances tol0{1e-2, 1e-2, 1e-1};
    Tolerances tol_terminal{1e-6, 1e-6, 1e-5};
    double tol_divisor = 5.0;   // eps^k = eps^{k-1} / divisor^{k-1}
    double slack_tol = 5e-5;    // ||s|| required for outer convergence
    int max_inner = 500;
    int max_outer = 200;
    int max_total_inner = 10000;
    Variant variant = Variant::hierarchical;
    BarrierConfig barrier;
    InexactnessSchedule inexact;
    BBConfig bb;
    bool record_trace = false;

    // Throws ConfigError naming the offending field. rho_factor below sqrt(2)
    // is rejected unless allow_weak_rho is set (used by the descent self-check).
    void validate(bool allow_weak_rho = false) const;
};

}  // namespace hadmm
