// models.hpp — the rotating hybrid-field qubit and the displaced oscillator with a
// Jaynes-Cummings qubit: time-dependent H0(t), drive, neglected part, frame unitaries.

#pragma once

#include "geophase/operators.hpp"

#include <numbers>

namespace geophase {

enum class ModelKind { classical, hybrid, oscillator };

// Which Hamiltonian generates the dynamics.
//   frame_exact: H0 + H_drive + H_neglected (instantaneous eigenstates are carried
//                exactly by the frame unitary)
//   bare:        H0 + H_drive, the neglected part switched off; eigenstates are
//                followed only adiabatically
enum class Dynamics { frame_exact, bare };

// Which tensor factor is the "system" whose reduced state carries the mixed phase.
enum class SystemFactor { first, second };

struct HybridModel {
    double B{1.0};
    double theta{0.0};
    double omega{1e-2};
    double mu{0.0};
    HalfInteger j{HalfInteger::from_twice(1)};

    // Qubit in a purely classical rotating field: mu = 0 and a one-dimensional field factor.
    static HybridModel classical(double B, double theta, double omega);

    void validate() const;
    int field_dim() const { return j.twice() + 1; }
    bool is_classical() const { return mu == 0.0; }
};

struct OscillatorModel {
    double nu{1.0};
    double g{1.0};
    double beta_mag{0.5};
    double omega{1e-3};
    int n_max{60};

    void validate() const;
    // Smallest truncation the model accepts for excitation index n.
    static int required_n_max(int n, double beta_mag);
};

// H(t) = constant + exp(-i w t) P + exp(+i w t) P^dagger.
// Both models have exactly this single-harmonic time dependence.
class HarmonicOperator {
public:
    HarmonicOperator() = default;
    HarmonicOperator(ComplexMatrix constant, ComplexMatrix positive, double omega);

    ComplexMatrix at(double t) const;
    void apply(double t, const StateVector& v, StateVector& out) const;
    StateVector apply(double t, const StateVector& v) const;

    // Returns a copy with `m` added to the constant part.
    HarmonicOperator plus(const ComplexMatrix& m) const;

    Eigen::Index dim() const { return constant_.rows(); }
    double omega() const { return omega_; }
    const ComplexMatrix& constant() const { return constant_; }
    const ComplexMatrix& positive() const { return positive_; }

private:
    ComplexMatrix constant_;
    ComplexMatrix positive_;
    ComplexMatrix negative_;  // positive^dagger
    double omega_{0.0};
};

// F(t) = exp(-i w t diag(generator)) * base.
class RotatingFrame {
public:
    RotatingFrame() = default;
    RotatingFrame(Eigen::VectorXd generator, double omega, ComplexMatrix base);

    ComplexMatrix at(double t) const;
    StateVector apply(double t, const StateVector& v) const;
    ComplexMatrix generator() const;
    const ComplexMatrix& base() const { return base_; }
    double omega() const { return omega_; }

private:
    Eigen::VectorXd generator_;
    double omega_{0.0};
    ComplexMatrix base_;
};

struct HamiltonianSet {
    ModelKind kind{ModelKind::hybrid};
    HarmonicOperator h0;
    ComplexMatrix h_drive;
    ComplexMatrix h_neglected;
    RotatingFrame frame;
    // Conserved excitation label in the static frame (diagonal in the product basis).
    Eigen::VectorXd static_label;
    Eigen::Index dim{0};
    Eigen::Index field_dim{0};
    SystemFactor system{SystemFactor::second};
    double omega{0.0};

    ComplexMatrix h0_at(double t) const { return h0.at(t); }
    ComplexMatrix frame_at(double t) const { return frame.at(t); }
    ComplexMatrix conserved_label_at(double t) const;

    // Hamiltonian integrated by the Schroedinger equation.
    HarmonicOperator generator(Dynamics dynamics = Dynamics::frame_exact) const;
    // Hamiltonian used for dynamic-phase and energy-fluctuation bookkeeping:
    // H0 + H_neglected (frame_exact) or H0 alone (bare). The drive never enters.
    HarmonicOperator system_hamiltonian(Dynamics dynamics = Dynamics::frame_exact) const;

    double period() const { return 2.0 * std::numbers::pi / omega; }
};

HamiltonianSet build_hybrid(const HybridModel& model);
HamiltonianSet build_oscillator(const OscillatorModel& model);

}  // namespace geophase
