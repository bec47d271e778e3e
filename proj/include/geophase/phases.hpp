// phases.hpp — total, dynamic, geometric, noncyclic and mixed-state phases.

#pragma once

#include "geophase/evolution.hpp"

#include <optional>
#include <vector>

namespace geophase {

// Wraps to (-pi, pi].
double wrap_phase(double phase);

// Composite Simpson rule on a uniform grid with an even number of intervals.
double simpson(const std::vector<double>& values, double dt);
// Running integral at every sample. Pairs of intervals reproduce Simpson exactly.
std::vector<double> cumulative_simpson(const std::vector<double>& values, double dt);

// <psi(t)|H(t)|psi(t)> at every sample of the trajectory.
std::vector<double> expectation_curve(const Trajectory& traj, const HarmonicOperator& h);

struct PhaseReport {
    double phi_total{0.0};
    double phi_dynamic{0.0};
    double gamma{0.0};
    double gamma_closed{0.0};
    double return_fidelity{0.0};
};

// phi_total = arg<psi(0)|psi(T)>, phi_dynamic = -int <H_sys> dt, gamma = wrap(phi_total - phi_dynamic).
// gamma_closed is left at 0; callers pairing with a closed form fill it in.
PhaseReport cyclic_phase_decomposition(const Trajectory& traj, const HarmonicOperator& h_sys,
                                       double min_return_fidelity = 1.0 - 1e-4);

struct ClosedPhase {
    double wrapped{0.0};
    double unwrapped{0.0};
};

// Geometric phase per period of the frame-transported eigenstate.
//   hybrid / classical: -+ pi (1 - cos(theta) cos(alpha_m)) for branch +/-
//   oscillator:         2 pi |beta|^2 +- pi (1 - cos(alpha_n))
ClosedPhase berry_closed(const HybridModel& model, HalfInteger m, Branch branch);
ClosedPhase berry_closed(const OscillatorModel& model, int n, Branch branch);
ClosedPhase classical_berry_closed(double theta, Branch branch);

// arg[sin^2(a/2) e^{i g+} + cos^2(a/2) e^{i g-}] with g-+ = +-pi (1 - cos theta), evaluated as
// atan2(cos(a) sin(g-), cos(g-)). The + branch uses alpha -> pi + alpha.
double mixed_geometric_closed(double alpha, double theta, Branch branch = Branch::minus);
// Oscillator: 2 pi |beta|^2 wrapped.
double mixed_geometric_closed_oscillator(double beta_mag);

// Reduced state of one tensor factor (field factor first, qubit second) at every sample.
ComplexMatrix reduced_density(const StateVector& psi, Eigen::Index field_dim, SystemFactor keep);
std::vector<ComplexMatrix> reduced_density_trajectory(const Trajectory& traj, Eigen::Index field_dim,
                                                      SystemFactor keep);

struct KinematicPhase {
    double gamma{0.0};       // wrapped
    double visibility{0.0};  // |sum_k p_k <phi_k(0)|phi_k(T)> ...|
    double min_gap{0.0};     // smallest spacing between a tracked eigenvalue and any other
    int tracked{0};
};

// Kinematic (parallel-transport) geometric phase of a sampled density-matrix path:
// arg sum_k p_k <phi_k(0)|phi_k(T)> prod_i <phi_k(t_{i+1})|phi_k(t_i)>, over eigenvectors
// with weight above weight_floor, followed by maximal overlap between neighbouring samples.
// Throws TrackingError if a tracked eigenvalue comes within min_gap of another one.
KinematicPhase mixed_geometric_kinematic(const std::vector<ComplexMatrix>& rho, double weight_floor = 1e-9,
                                         double min_gap = 1e-6);

struct NoncyclicCurve {
    std::vector<double> times;
    std::vector<double> gamma;          // unwrapped, NaN at skipped samples
    std::vector<double> dynamic_phase;  // -int_0^t <H_sys>
    std::optional<double> crossing_time;  // first time |gamma| reaches pi
    double max_jump{0.0};                 // largest step-to-step change between valid samples
    std::size_t skipped{0};               // samples with |<psi(0)|psi(t)>| < 1e-6
};

// gamma_nc(t) = arg<psi(0)|psi(t)> + int_0^t <H_sys> dt', unwrapped along t by nearest-branch
// continuation. The crossing is located by linear interpolation between samples and counts
// values within crossing_slack of pi as reaching it.
NoncyclicCurve noncyclic_phase_curve(const Trajectory& traj, const HarmonicOperator& h_sys,
                                     double crossing_slack = 1e-6);

}  // namespace geophase
