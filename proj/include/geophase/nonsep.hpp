// nonsep.hpp — concurrence, energy fluctuation, the action S = 2 int dE dt, the
// entanglement bound C <= S / 2 pi, and the time-energy uncertainty probe.

#pragma once

#include "geophase/phases.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace geophase {

// Pure state on field (x) qubit: 2 sqrt(det rho_qubit), from the Schmidt coefficients.
double concurrence(const StateVector& state, Eigen::Index field_dim);

// sqrt(<H^2> - <H>^2), evaluated as |(H - <H>) psi|.
double energy_uncertainty(const StateVector& state, const ComplexMatrix& h);
std::vector<std::pair<double, double>> energy_uncertainty_curve(const Trajectory& traj, const HarmonicOperator& h_sys);

// 2 int dE dt over the whole trajectory (Simpson).
double action(const Trajectory& traj, const HarmonicOperator& h_sys);

double classical_action_closed(double theta);                 // 2 pi sin(theta)
double hybrid_action_closed(double theta, double alpha);      // 2 pi sqrt(1 - cos^2 theta cos^2 alpha)
double oscillator_action_simple(int n, double beta_mag, double alpha);  // 2 pi sqrt(4(2n+1)|b|^2 + sin^2 alpha)
// Variance of omega a^dagger a in the displaced JC eigenstate:
// 2 pi sqrt(sin^2 alpha + 4 |b|^2 (2n + 1 + 2 w)), w = sin^2(alpha/2) (+) or cos^2(alpha/2) (-).
double oscillator_action_exact(int n, double beta_mag, double alpha, Branch branch);

// cos(theta_m) = cos(theta) cos(alpha).
double effective_angle(double theta, double alpha);

struct NonsepReport {
    double concurrence{0.0};
    double concurrence_closed{0.0};
    std::vector<std::pair<double, double>> delta_e_curve;
    double action{0.0};
    double action_closed{0.0};
    double action_simple{0.0};
    double effective_angle{0.0};  // NaN for the oscillator
    double bound_ratio{0.0};      // C / (S / 2 pi); 1 when both are below 1e-8
    bool equality_case{false};    // sin(theta) cos(alpha) = 0 (hybrid)
    double alpha{0.0};
    double gamma_berry{0.0};
    double gamma_berry_closed{0.0};
    double gamma_mixed{0.0};         // NaN when the reduced spectrum is degenerate along the path
    double gamma_mixed_closed{0.0};  // NaN when undefined (vanishing visibility)
    double return_fidelity{0.0};
    double min_fidelity{0.0};
    double norm_drift{0.0};
};

struct ReportOptions {
    double tolerance{1e-10};
    int samples_per_period{400};
    bool kinematic{true};  // evaluate the mixed phase from the reduced-state path
};

// One period of frame-exact evolution from the closed-form eigenstate, with every
// nonseparability quantity paired against its closed form.
NonsepReport complementarity_report(const HybridModel& model, HalfInteger m, Branch branch,
                                    const ReportOptions& options = {});
NonsepReport complementarity_report(const OscillatorModel& model, int n, Branch branch,
                                    const ReportOptions& options = {});

struct ProbeResult {
    std::optional<double> delta_t;  // first |gamma_nc| = pi time
    double integral{0.0};           // int_0^delta_t dE dt (NaN without a crossing)
    bool satisfied{false};          // integral >= pi (1 - 1e-2)
    double max_jump{0.0};           // largest step of the noncyclic phase curve
    std::size_t skipped{0};
};

struct ProbeOptions {
    double tolerance{1e-10};
    int samples_per_period{400};
    int max_periods{16};
};

// Classical field (mu = 0) eigenstate on the - branch, followed until its noncyclic
// geometric phase first reaches |pi|.
ProbeResult uncertainty_relation_probe(const HybridModel& model, const ProbeOptions& options = {});

}  // namespace geophase
