// errors.hpp — exception types raised by the geophase library

#pragma once

#include <stdexcept>
#include <string>

namespace geophase {

// A model or operator parameter violates its documented invariant.
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Matrix/state arguments are inconsistent (wrong dimension, non-hermitian, ...).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Eigen-branch index outside the admissible range.
class IndexError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Requested branch does not exist at an edge index (one-dimensional block).
class EdgeBranchError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The conserved label used to block-sort eigenpairs does not commute with H.
class LabelingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Adaptive integrator could not make progress.
class StiffnessError : public std::runtime_error {
public:
    StiffnessError(const std::string& what, double time)
        : std::runtime_error(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

// Trajectory does not return to its initial ray closely enough for a cyclic phase.
class CyclicityError : public std::runtime_error {
public:
    CyclicityError(const std::string& what, double return_fidelity)
        : std::runtime_error(what), return_fidelity_(return_fidelity) {}
    double return_fidelity() const noexcept { return return_fidelity_; }

private:
    double return_fidelity_;
};

// Eigenvector continuity tracking of a density matrix failed (level crossing).
class TrackingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A phase was requested of a complex number with vanishing magnitude.
class UndefinedPhaseError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace geophase
