// spectra.hpp — instantaneous eigenpairs of H0(t): closed forms and a labelled
// numerical diagonalizer used as their independent check.

#pragma once

#include "geophase/models.hpp"

#include <vector>

namespace geophase {

enum class Branch { plus, minus };

inline const char* to_string(Branch b) { return b == Branch::plus ? "+" : "-"; }

struct EigenBranch {
    ModelKind model_kind{ModelKind::hybrid};
    HalfInteger index;  // m (hybrid/classical) or n (oscillator)
    Branch branch{Branch::plus};
    double alpha{0.0};
    double energy{0.0};
    bool edge{false};
    StateVector static_ket;  // ket at the frame origin, before the frame unitary
    RotatingFrame frame;

    StateVector ket_at(double t) const { return frame.apply(t, static_ket); }
};

// alpha_m = atan2(mu sqrt(j(j+1) - m(m+1)), B + mu (m + 1/2)), in [0, pi].
double hybrid_mixing_angle(const HybridModel& model, HalfInteger m);
// alpha_n = atan2(g sqrt(n+1), nu), in [0, pi/2).
double oscillator_mixing_angle(const OscillatorModel& model, int n);

EigenBranch hybrid_eigensystem(const HybridModel& model, HalfInteger m, Branch branch);
EigenBranch oscillator_eigensystem(const OscillatorModel& model, int n, Branch branch);

// Every (index, branch) pair that exists for the model; edges contribute one branch.
std::vector<std::pair<HalfInteger, Branch>> hybrid_branches(const HybridModel& model);
std::vector<std::pair<int, Branch>> oscillator_branches(const OscillatorModel& model, int n_highest);

struct NumericEigenpair {
    double energy{0.0};
    StateVector vector;
    double label{0.0};
    Eigen::Index block_size{0};
};

// Diagonalizes H inside each eigenspace of the conserved label, so that every returned
// vector carries a definite label even when H is degenerate. Vectors are gauge fixed
// (first component of magnitude > 1e-8 real and positive). Sorted by (label, energy).
std::vector<NumericEigenpair> numeric_eigensystem(const ComplexMatrix& h, const ComplexMatrix& label);

// Eigenvector of H0(0) - H_neglected closest to branch.ket_at(0), phase aligned with it.
// Under the bare route (neglected part switched off) this is the state the branch
// adiabatically continues into, so starting there avoids a sudden-switch transient.
StateVector rotating_frame_eigenstate(const HamiltonianSet& set, const EigenBranch& branch);

// |<a|b>|
double overlap_magnitude(const StateVector& a, const StateVector& b);

}  // namespace geophase
