#include "hadmm/solver_config.hpp"

#include "hadmm/types.hpp"

#include <cmath>
#include <numbers>

namespace hadmm {

std::string to_string(Variant v) { return v == Variant::hierarchical ? "hierarchical" : "improved"; }

Variant parse_variant(const std::string& s) {
    if (s == "hierarchical") return Variant::hierarchical;
    if (s == "improved") return Variant::improved;
    throw ConfigError("variant: unknown value '" + s + "'");
}

void BarrierConfig::validate() const {
    if (!(b0 > 0.0)) throw ConfigError("barrier.b0 must be positive");
    if (!(decay > 0.0 && decay < 1.0)) throw ConfigError("barrier.decay must lie in (0, 1)");
    if (!(eps_b > 0.0)) throw ConfigError("barrier.eps_b must be positive");
}

void InexactnessSchedule::validate() const {
    if (!(eps4_0 > 0.0)) throw ConfigError("inexactness.eps4_0 must be positive");
    if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("inexactness.ratio must lie in (0, 1)");
    if (!(floor > 0.0)) throw ConfigError("inexactness.floor must be positive");
}

void BBConfig::validate() const {
    if (!(step_min > 0.0 && step_max > step_min)) throw ConfigError("bb step limits are invalid");
    if (!(armijo > 0.0 && armijo < 1.0)) throw ConfigError("bb.armijo must lie in (0, 1)");
    if (max_backtracks < 1 || max_iter < 1) throw ConfigError("bb iteration limits must be positive");
}

void SolverConfig::validate(bool allow_weak_rho) const {
    if (!(beta0 > 0.0)) throw ConfigError("solver.beta0 must be positive");
    if (!(rho_factor > 0.0)) throw ConfigError("solver.rho_factor must be positive");
    if (!allow_weak_rho && rho_factor < std::numbers::sqrt2)
        throw ConfigError("solver.rho_factor must be >= sqrt(2)");
    if (!(gamma > 1.0)) throw ConfigError("solver.gamma must exceed 1");
    if (!(omega >= 0.0 && omega < 1.0)) throw ConfigError("solver.omega must lie in [0, 1)");
    if (!(lambda_lo < lambda_hi)) throw ConfigError("solver.lambda bounds are crossed");
    if (!(tol_terminal.e1 > 0.0 && tol_terminal.e2 > 0.0 && tol_terminal.e3 > 0.0))
        throw ConfigError("solver.terminal tolerances must be positive");
    if (!(tol0.e1 >= tol_terminal.e1 && tol0.e2 >= tol_terminal.e2 && tol0.e3 >= tol_terminal.e3))
        throw ConfigError("solver.initial tolerances must not be tighter than terminal ones");
    if (!(tol_divisor > 1.0)) throw ConfigError("solver.tol_divisor must exceed 1");
    if (!(slack_tol > 0.0)) throw ConfigError("solver.slack_tol must be positive");
    if (max_inner < 1 || max_outer < 1 || max_total_inner < 1)
        throw ConfigError("solver iteration caps must be positive");
    barrier.validate();
    inexact.validate();
    bb.validate();
}

}  // namespace hadmm
