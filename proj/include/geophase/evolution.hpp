// evolution.hpp — adaptive integration of i d/dt psi = H(t) psi with dense output.

#pragma once

#include "geophase/models.hpp"
#include "geophase/spectra.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace geophase {

struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector> states;
    double tolerance{0.0};
    double norm_drift{0.0};  // max | |psi(t)| - 1 | over the samples
    std::size_t accepted_steps{0};
    std::size_t rejected_steps{0};

    std::size_t size() const { return times.size(); }
    double t_end() const { return times.back(); }
};

struct EvolveOptions {
    Dynamics dynamics{Dynamics::frame_exact};
    int samples_per_period{400};
    double t_start{0.0};
    // Integrate in the interaction picture of the diagonal of the constant part of H.
    // This removes the large diagonal (e.g. nu a^dagger a) from the step-size limit.
    bool interaction_picture{true};
    std::size_t max_steps{20'000'000};
};

// Uniform output grid over [t_start, t_end] with an even number of intervals
// (at least samples_per_period per period 2 pi / omega).
std::vector<double> sample_grid(double t_start, double t_end, double omega, int samples_per_period);

// DOP853 (8th order, embedded 5th/3rd order error estimate, 7th order dense output),
// atol = rtol = tolerance. Throws StiffnessError if the step size underflows.
Trajectory evolve(const HarmonicOperator& h, const StateVector& psi0, const std::vector<double>& grid,
                  double tolerance, bool interaction_picture = true,
                  std::size_t max_steps = 20'000'000);

Trajectory evolve(const HamiltonianSet& set, const StateVector& psi0, double t_end, double tolerance,
                  const EvolveOptions& options = {});

// |<branch.ket(t)|psi(t)>|^2 at every sample.
std::vector<std::pair<double, double>> instantaneous_fidelity(const Trajectory& traj, const EigenBranch& branch);

}  // namespace geophase
