#include "geophase/phases.hpp"

#include "geophase/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace geophase {

namespace {

constexpr double kPi = std::numbers::pi;

double uniform_step(const Trajectory& traj) {
    if (traj.size() < 3) throw InvalidInput("trajectory needs at least three samples");
    return (traj.times.back() - traj.times.front()) / static_cast<double>(traj.size() - 1);
}

}  // namespace

double wrap_phase(double phase) {
    double w = std::remainder(phase, 2.0 * kPi);
    if (w <= -kPi) w += 2.0 * kPi;
    return w;
}

double simpson(const std::vector<double>& values, double dt) {
    const std::size_t n = values.size();
    if (n < 3 || (n - 1) % 2 != 0) throw InvalidInput("simpson: need an even number (>= 2) of intervals");
    double sum = values.front() + values.back();
    for (std::size_t i = 1; i + 1 < n; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * values[i];
    return sum * dt / 3.0;
}

std::vector<double> cumulative_simpson(const std::vector<double>& values, double dt) {
    const std::size_t n = values.size();
    if (n < 3) throw InvalidInput("cumulative_simpson: need at least three samples");
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double piece;
        if (i % 2 == 0 && i + 2 < n) {
            piece = (5.0 * values[i] + 8.0 * values[i + 1] - values[i + 2]) / 12.0;
        } else {
            piece = (-values[i - 1] + 8.0 * values[i] + 5.0 * values[i + 1]) / 12.0;
        }
        out[i + 1] = out[i] + piece * dt;
    }
    return out;
}

std::vector<double> expectation_curve(const Trajectory& traj, const HarmonicOperator& h) {
    std::vector<double> out;
    out.reserve(traj.size());
    StateVector hv(h.dim());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto& psi = traj.states[i];
        if (psi.size() != h.dim()) throw InvalidInput("expectation_curve: dimension mismatch");
        h.apply(traj.times[i], psi, hv);
        out.push_back(psi.dot(hv).real());
    }
    return out;
}

PhaseReport cyclic_phase_decomposition(const Trajectory& traj, const HarmonicOperator& h_sys,
                                       double min_return_fidelity) {
    const double dt = uniform_step(traj);
    const Complex overlap = traj.states.front().dot(traj.states.back());
    PhaseReport r;
    r.return_fidelity = std::min(1.0, std::abs(overlap));
    if (r.return_fidelity < min_return_fidelity) {
        std::ostringstream os;
        os << "trajectory is not cyclic: return fidelity " << r.return_fidelity;
        throw CyclicityError(os.str(), r.return_fidelity);
    }
    r.phi_total = std::arg(overlap);
    r.phi_dynamic = -simpson(expectation_curve(traj, h_sys), dt);
    r.gamma = wrap_phase(r.phi_total - r.phi_dynamic);
    return r;
}

ClosedPhase classical_berry_closed(double theta, Branch branch) {
    const double g = kPi * (1.0 - std::cos(theta));
    const double u = branch == Branch::plus ? -g : g;
    return {wrap_phase(u), u};
}

ClosedPhase berry_closed(const HybridModel& model, HalfInteger m, Branch branch) {
    const auto eb = hybrid_eigensystem(model, m, branch);
    const double g = kPi * (1.0 - std::cos(model.theta) * std::cos(eb.alpha));
    const double u = branch == Branch::plus ? -g : g;
    return {wrap_phase(u), u};
}

ClosedPhase berry_closed(const OscillatorModel& model, int n, Branch branch) {
    const auto eb = oscillator_eigensystem(model, n, branch);
    const double q = kPi * (1.0 - std::cos(eb.alpha));
    const double u = 2.0 * kPi * model.beta_mag * model.beta_mag + (branch == Branch::plus ? q : -q);
    return {wrap_phase(u), u};
}

double mixed_geometric_closed(double alpha, double theta, Branch branch) {
    if (alpha < 0.0 || alpha > kPi || theta < 0.0 || theta > kPi)
        throw InvalidParameter("mixed_geometric_closed: alpha and theta must lie in [0, pi]");
    const double gm = kPi * (1.0 - std::cos(theta));
    const double ca = branch == Branch::plus ? -std::cos(alpha) : std::cos(alpha);
    const double y = ca * std::sin(gm);
    const double x = std::cos(gm);
    if (std::hypot(x, y) < 1e-14) throw UndefinedPhaseError("mixed geometric phase undefined: vanishing visibility");
    return std::atan2(y, x);
}

double mixed_geometric_closed_oscillator(double beta_mag) {
    return wrap_phase(2.0 * kPi * beta_mag * beta_mag);
}

ComplexMatrix reduced_density(const StateVector& psi, Eigen::Index field_dim, SystemFactor keep) {
    if (field_dim < 1 || psi.size() != 2 * field_dim)
        throw InvalidInput("reduced_density: state dimension is not field_dim * 2");
    // row f, column q <-> index 2 f + q
    const Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, 2, Eigen::RowMajor>> m(psi.data(), field_dim, 2);
    if (keep == SystemFactor::second) return m.transpose() * m.conjugate();
    return m * m.adjoint();
}

std::vector<ComplexMatrix> reduced_density_trajectory(const Trajectory& traj, Eigen::Index field_dim,
                                                      SystemFactor keep) {
    std::vector<ComplexMatrix> out;
    out.reserve(traj.size());
    for (const auto& s : traj.states) out.push_back(reduced_density(s, field_dim, keep));
    return out;
}

KinematicPhase mixed_geometric_kinematic(const std::vector<ComplexMatrix>& rho, double weight_floor,
                                         double min_gap) {
    if (rho.size() < 2) throw InvalidInput("mixed_geometric_kinematic: need at least two samples");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.front());
    const Eigen::VectorXd p0 = solver.eigenvalues();

    std::vector<double> weight;
    std::vector<StateVector> first, prev;
    std::vector<Complex> product;
    std::vector<Eigen::Index> start_index;
    for (Eigen::Index k = 0; k < p0.size(); ++k) {
        if (p0(k) > weight_floor) {
            start_index.push_back(k);
            weight.push_back(p0(k));
            first.push_back(solver.eigenvectors().col(k));
            product.emplace_back(1.0, 0.0);
        }
    }
    if (weight.empty()) throw InvalidInput("mixed_geometric_kinematic: density matrix has no weight");
    prev = first;

    KinematicPhase result;
    result.tracked = static_cast<int>(weight.size());
    result.min_gap = std::numeric_limits<double>::infinity();

    auto check_gap = [&](const Eigen::VectorXd& ev, Eigen::Index pick, std::size_t sample) {
        for (Eigen::Index o = 0; o < ev.size(); ++o) {
            if (o == pick) continue;
            const double gap = std::abs(ev(o) - ev(pick));
            result.min_gap = std::min(result.min_gap, gap);
            if (gap < min_gap) {
                std::ostringstream os;
                os << "mixed_geometric_kinematic: eigenvalue crossing of rho at sample " << sample
                   << " (gap " << gap << ")";
                throw TrackingError(os.str());
            }
        }
    };
    for (auto c : start_index) check_gap(p0, c, 0);

    for (std::size_t i = 1; i < rho.size(); ++i) {
        solver.compute(rho[i]);
        const Eigen::VectorXd& ev = solver.eigenvalues();
        const ComplexMatrix& vec = solver.eigenvectors();
        std::vector<Eigen::Index> used;
        for (std::size_t k = 0; k < weight.size(); ++k) {
            Eigen::Index best = 0;
            double best_overlap = -1.0;
            for (Eigen::Index c = 0; c < ev.size(); ++c) {
                const double o = std::abs(vec.col(c).dot(prev[k]));
                if (o > best_overlap) {
                    best_overlap = o;
                    best = c;
                }
            }
            for (auto u : used)
                if (u == best) throw TrackingError("mixed_geometric_kinematic: two tracked eigenvectors merged");
            used.push_back(best);
            check_gap(ev, best, i);
            StateVector v = vec.col(best);
            product[k] *= v.dot(prev[k]);
            prev[k] = std::move(v);
        }
    }

    Complex total(0.0, 0.0);
    for (std::size_t k = 0; k < weight.size(); ++k) total += weight[k] * first[k].dot(prev[k]) * product[k];
    result.visibility = std::abs(total);
    if (result.visibility < 1e-12) throw UndefinedPhaseError("mixed_geometric_kinematic: vanishing visibility");
    result.gamma = std::arg(total);
    return result;
}

NoncyclicCurve noncyclic_phase_curve(const Trajectory& traj, const HarmonicOperator& h_sys, double crossing_slack) {
    const double dt = uniform_step(traj);
    const auto energy = expectation_curve(traj, h_sys);
    const auto integral = cumulative_simpson(energy, dt);

    NoncyclicCurve curve;
    curve.times = traj.times;
    curve.gamma.assign(traj.size(), std::numeric_limits<double>::quiet_NaN());
    curve.dynamic_phase.resize(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) curve.dynamic_phase[i] = -integral[i];

    bool have_prev = false;
    double prev_value = 0.0;
    double prev_time = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const Complex overlap = traj.states.front().dot(traj.states[i]);
        if (std::abs(overlap) < 1e-6) {
            ++curve.skipped;
            continue;
        }
        double value = std::arg(overlap) + integral[i];
        if (have_prev) {
            value -= 2.0 * kPi * std::round((value - prev_value) / (2.0 * kPi));
            curve.max_jump = std::max(curve.max_jump, std::abs(value - prev_value));
        }
        curve.gamma[i] = value;
        if (!curve.crossing_time && std::abs(value) >= kPi - crossing_slack) {
            if (!have_prev || std::abs(value) <= kPi) {
                curve.crossing_time = traj.times[i];
            } else {
                const double a = std::abs(prev_value);
                const double b = std::abs(value);
                const double frac = b > a ? std::clamp((kPi - a) / (b - a), 0.0, 1.0) : 1.0;
                curve.crossing_time = prev_time + frac * (traj.times[i] - prev_time);
            }
        }
        have_prev = true;
        prev_value = value;
        prev_time = traj.times[i];
    }
    return curve;
}

}  // namespace geophase
