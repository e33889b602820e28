#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <stdexcept>
#include <string>

namespace hadmm {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double>;

// Malformed arguments: dimension mismatches, crossed bounds, bad indices.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Invalid solver or scenario settings.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A point outside the barrier's interior was evaluated.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// |theta| >= pi/2, where the Euler-rate matrix is undefined.
class SingularAttitudeError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Numerical failure inside a solver. Carries the last iterate for diagnostics.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, Vec last_iterate)
        : std::runtime_error(what), last_iterate_(std::move(last_iterate)) {}
    const Vec& last_iterate() const { return last_iterate_; }

private:
    Vec last_iterate_;
};

}  // namespace hadmm
