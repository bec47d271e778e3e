#include "geophase/nonsep.hpp"

#include "geophase/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace geophase {

namespace {

constexpr double kPi = std::numbers::pi;

double bound_ratio(double c, double s) {
    const double sn = s / (2.0 * kPi);
    if (c <= 1e-8 && sn <= 1e-8) return 1.0;
    return c / sn;
}

double min_fidelity(const Trajectory& traj, const EigenBranch& branch) {
    double out = 1.0;
    for (const auto& [t, f] : instantaneous_fidelity(traj, branch)) out = std::min(out, f);
    return out;
}

// NaN when the reduced path has no trackable eigenbasis (degenerate spectrum) or no visibility.
double kinematic_or_nan(const Trajectory& traj, const HamiltonianSet& set) {
    try {
        return mixed_geometric_kinematic(reduced_density_trajectory(traj, set.field_dim, set.system)).gamma;
    } catch (const TrackingError&) {
        return std::numeric_limits<double>::quiet_NaN();
    } catch (const UndefinedPhaseError&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

}  // namespace

double concurrence(const StateVector& state, Eigen::Index field_dim) {
    if (field_dim < 1 || state.size() != 2 * field_dim)
        throw InvalidInput("concurrence: state dimension is not field_dim * 2");
    const Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, 2, Eigen::RowMajor>> m(state.data(), field_dim, 2);
    if (field_dim == 1) return 0.0;
    const ComplexMatrix dense = m;
    Eigen::JacobiSVD<ComplexMatrix> svd(dense);
    const auto& s = svd.singularValues();
    return std::clamp(2.0 * s(0) * s(1) / state.squaredNorm(), 0.0, 1.0);
}

double energy_uncertainty(const StateVector& state, const ComplexMatrix& h) {
    const StateVector hv = h * state;
    const double mean = state.dot(hv).real();
    return (hv - mean * state).norm();
}

std::vector<std::pair<double, double>> energy_uncertainty_curve(const Trajectory& traj, const HarmonicOperator& h_sys) {
    std::vector<std::pair<double, double>> out;
    out.reserve(traj.size());
    StateVector hv(h_sys.dim());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto& psi = traj.states[i];
        h_sys.apply(traj.times[i], psi, hv);
        const double mean = psi.dot(hv).real();
        out.emplace_back(traj.times[i], (hv - mean * psi).norm());
    }
    return out;
}

double action(const Trajectory& traj, const HarmonicOperator& h_sys) {
    const auto curve = energy_uncertainty_curve(traj, h_sys);
    std::vector<double> values;
    values.reserve(curve.size());
    for (const auto& p : curve) values.push_back(p.second);
    const double dt = (traj.times.back() - traj.times.front()) / static_cast<double>(traj.size() - 1);
    return 2.0 * simpson(values, dt);
}

double classical_action_closed(double theta) { return 2.0 * kPi * std::sin(theta); }

double hybrid_action_closed(double theta, double alpha) {
    const double c = std::cos(theta) * std::cos(alpha);
    return 2.0 * kPi * std::sqrt(std::max(0.0, 1.0 - c * c));
}

double oscillator_action_simple(int n, double beta_mag, double alpha) {
    const double s = std::sin(alpha);
    return 2.0 * kPi * std::sqrt(4.0 * (2.0 * n + 1.0) * beta_mag * beta_mag + s * s);
}

double oscillator_action_exact(int n, double beta_mag, double alpha, Branch branch) {
    const double s = std::sin(alpha);
    const double w = branch == Branch::plus ? std::pow(std::sin(0.5 * alpha), 2) : std::pow(std::cos(0.5 * alpha), 2);
    return 2.0 * kPi * std::sqrt(s * s + 4.0 * beta_mag * beta_mag * (2.0 * n + 1.0 + 2.0 * w));
}

double effective_angle(double theta, double alpha) {
    return std::acos(std::clamp(std::cos(theta) * std::cos(alpha), -1.0, 1.0));
}

NonsepReport complementarity_report(const HybridModel& model, HalfInteger m, Branch branch,
                                    const ReportOptions& options) {
    const auto set = build_hybrid(model);
    const auto eb = hybrid_eigensystem(model, m, branch);
    EvolveOptions evo;
    evo.samples_per_period = options.samples_per_period;
    const auto traj = evolve(set, eb.ket_at(0.0), set.period(), options.tolerance, evo);
    const auto h_sys = set.system_hamiltonian();

    NonsepReport r;
    r.alpha = eb.alpha;
    r.concurrence = concurrence(traj.states.front(), set.field_dim);
    r.concurrence_closed = std::sin(eb.alpha);
    r.delta_e_curve = energy_uncertainty_curve(traj, h_sys);
    r.action = action(traj, h_sys);
    r.action_closed = hybrid_action_closed(model.theta, eb.alpha);
    r.action_simple = r.action_closed;
    r.effective_angle = effective_angle(model.theta, eb.alpha);
    r.bound_ratio = bound_ratio(r.concurrence, r.action);
    r.equality_case = std::abs(std::sin(model.theta) * std::cos(eb.alpha)) < 1e-12;

    const auto phases = cyclic_phase_decomposition(traj, h_sys);
    r.gamma_berry = phases.gamma;
    r.gamma_berry_closed = berry_closed(model, m, branch).wrapped;
    r.return_fidelity = phases.return_fidelity;
    try {
        r.gamma_mixed_closed = mixed_geometric_closed(eb.alpha, model.theta, branch);
    } catch (const UndefinedPhaseError&) {
        r.gamma_mixed_closed = std::numeric_limits<double>::quiet_NaN();
    }
    r.gamma_mixed = options.kinematic ? kinematic_or_nan(traj, set) : std::numeric_limits<double>::quiet_NaN();
    r.min_fidelity = min_fidelity(traj, eb);
    r.norm_drift = traj.norm_drift;
    return r;
}

NonsepReport complementarity_report(const OscillatorModel& model, int n, Branch branch,
                                    const ReportOptions& options) {
    const auto set = build_oscillator(model);
    const auto eb = oscillator_eigensystem(model, n, branch);
    EvolveOptions evo;
    evo.samples_per_period = options.samples_per_period;
    const auto traj = evolve(set, eb.ket_at(0.0), set.period(), options.tolerance, evo);
    const auto h_sys = set.system_hamiltonian();

    NonsepReport r;
    r.alpha = eb.alpha;
    r.concurrence = concurrence(traj.states.front(), set.field_dim);
    r.concurrence_closed = std::sin(eb.alpha);
    r.delta_e_curve = energy_uncertainty_curve(traj, h_sys);
    r.action = action(traj, h_sys);
    r.action_closed = oscillator_action_exact(n, model.beta_mag, eb.alpha, branch);
    r.action_simple = oscillator_action_simple(n, model.beta_mag, eb.alpha);
    r.effective_angle = std::numeric_limits<double>::quiet_NaN();
    r.bound_ratio = bound_ratio(r.concurrence, r.action);
    r.equality_case = false;

    const auto phases = cyclic_phase_decomposition(traj, h_sys);
    r.gamma_berry = phases.gamma;
    r.gamma_berry_closed = berry_closed(model, n, branch).wrapped;
    r.return_fidelity = phases.return_fidelity;
    r.gamma_mixed_closed = mixed_geometric_closed_oscillator(model.beta_mag);
    r.gamma_mixed = options.kinematic ? kinematic_or_nan(traj, set) : std::numeric_limits<double>::quiet_NaN();
    r.min_fidelity = min_fidelity(traj, eb);
    r.norm_drift = traj.norm_drift;
    return r;
}

ProbeResult uncertainty_relation_probe(const HybridModel& model, const ProbeOptions& options) {
    if (model.mu != 0.0) throw InvalidParameter("uncertainty probe: the field must be classical (mu = 0)");
    if (!(model.theta > 0.0 && model.theta <= 0.5 * kPi + 1e-12))
        throw InvalidParameter("uncertainty probe: theta must lie in (0, pi/2]");
    if (!(model.B > 0.0 && model.omega / model.B <= 1e-2 * (1.0 + 1e-12)))
        throw InvalidParameter("uncertainty probe: requires an adiabatic rotation, omega / B <= 1e-2");
    if (options.max_periods < 1) throw InvalidParameter("uncertainty probe: max_periods must be >= 1");

    const auto classical = HybridModel::classical(model.B, model.theta, model.omega);
    const auto set = build_hybrid(classical);
    const auto eb = hybrid_eigensystem(classical, HalfInteger::from_twice(-2), Branch::minus);
    EvolveOptions evo;
    evo.samples_per_period = options.samples_per_period;
    const auto traj = evolve(set, eb.ket_at(0.0), options.max_periods * set.period(), options.tolerance, evo);
    const auto h_sys = set.system_hamiltonian();
    const auto curve = noncyclic_phase_curve(traj, h_sys);

    ProbeResult r;
    r.max_jump = curve.max_jump;
    r.skipped = curve.skipped;
    r.delta_t = curve.crossing_time;
    if (!r.delta_t) {
        r.integral = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    std::vector<double> de;
    for (const auto& p : energy_uncertainty_curve(traj, h_sys)) de.push_back(p.second);
    const double dt = (traj.times.back() - traj.times.front()) / static_cast<double>(traj.size() - 1);
    const auto cum = cumulative_simpson(de, dt);
    const double x = (*r.delta_t - traj.times.front()) / dt;
    const auto i = std::min(static_cast<std::size_t>(std::floor(x)), traj.size() - 2);
    const double frac = x - static_cast<double>(i);
    r.integral = cum[i] + frac * (cum[i + 1] - cum[i]);
    r.satisfied = r.integral >= kPi * (1.0 - 1e-2);
    return r;
}

}  // namespace geophase
