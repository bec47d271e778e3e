#include "geophase/models.hpp"

#include "geophase/errors.hpp"

#include <cmath>
#include <sstream>

namespace geophase {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw InvalidParameter(what);
}

}  // namespace

HybridModel HybridModel::classical(double B, double theta, double omega) {
    return HybridModel{B, theta, omega, 0.0, HalfInteger::from_twice(0)};
}

void HybridModel::validate() const {
    require(std::isfinite(B) && B >= 0.0, "hybrid model: B must be >= 0");
    require(std::isfinite(mu) && mu >= 0.0, "hybrid model: mu must be >= 0");
    require(theta >= 0.0 && theta <= std::numbers::pi, "hybrid model: theta must lie in [0, pi]");
    require(std::isfinite(omega) && omega > 0.0, "hybrid model: omega must be > 0");
    require(j.twice() >= 0, "hybrid model: j must be >= 0");
    require(B > 0.0 || mu > 0.0, "hybrid model: B and mu cannot both vanish");
}

int OscillatorModel::required_n_max(int n, double beta_mag) {
    return n + 10 + static_cast<int>(std::ceil(8.0 * beta_mag * beta_mag));
}

void OscillatorModel::validate() const {
    require(std::isfinite(nu) && nu > 0.0, "oscillator model: nu must be > 0");
    require(std::isfinite(g) && g >= 0.0, "oscillator model: g must be >= 0");
    require(std::isfinite(omega) && omega > 0.0, "oscillator model: omega must be > 0");
    require(std::isfinite(beta_mag) && beta_mag >= 0.0, "oscillator model: |beta| must be >= 0");
    if (n_max < required_n_max(0, beta_mag)) {
        std::ostringstream os;
        os << "oscillator model: n_max = " << n_max << " too small for |beta| = " << beta_mag
           << " (need >= " << required_n_max(0, beta_mag) << ")";
        throw InvalidParameter(os.str());
    }
}

// ---------------------------------------------------------------------------

HarmonicOperator::HarmonicOperator(ComplexMatrix constant, ComplexMatrix positive, double omega)
    : constant_(std::move(constant)),
      positive_(std::move(positive)),
      negative_(positive_.adjoint()),
      omega_(omega) {
    if (constant_.rows() != constant_.cols() || positive_.rows() != constant_.rows() ||
        positive_.cols() != constant_.cols())
        throw InvalidInput("HarmonicOperator: parts must be square and of equal dimension");
}

ComplexMatrix HarmonicOperator::at(double t) const {
    const Complex e = std::exp(-kI * (omega_ * t));
    return constant_ + e * positive_ + std::conj(e) * negative_;
}

void HarmonicOperator::apply(double t, const StateVector& v, StateVector& out) const {
    const Complex e = std::exp(-kI * (omega_ * t));
    out.noalias() = constant_ * v;
    out.noalias() += e * (positive_ * v);
    out.noalias() += std::conj(e) * (negative_ * v);
}

StateVector HarmonicOperator::apply(double t, const StateVector& v) const {
    StateVector out(v.size());
    apply(t, v, out);
    return out;
}

HarmonicOperator HarmonicOperator::plus(const ComplexMatrix& m) const {
    return HarmonicOperator(constant_ + m, positive_, omega_);
}

// ---------------------------------------------------------------------------

RotatingFrame::RotatingFrame(Eigen::VectorXd generator, double omega, ComplexMatrix base)
    : generator_(std::move(generator)), omega_(omega), base_(std::move(base)) {}

ComplexMatrix RotatingFrame::at(double t) const {
    ComplexMatrix out = base_;
    for (Eigen::Index k = 0; k < generator_.size(); ++k)
        out.row(k) *= std::exp(-kI * (omega_ * t * generator_(k)));
    return out;
}

StateVector RotatingFrame::apply(double t, const StateVector& v) const {
    StateVector out = base_ * v;
    for (Eigen::Index k = 0; k < generator_.size(); ++k)
        out(k) *= std::exp(-kI * (omega_ * t * generator_(k)));
    return out;
}

ComplexMatrix RotatingFrame::generator() const {
    return generator_.cast<Complex>().asDiagonal();
}

// ---------------------------------------------------------------------------

ComplexMatrix HamiltonianSet::conserved_label_at(double t) const {
    const ComplexMatrix f = frame.at(t);
    return f * static_label.cast<Complex>().asDiagonal() * f.adjoint();
}

HarmonicOperator HamiltonianSet::generator(Dynamics dynamics) const {
    if (dynamics == Dynamics::frame_exact) return h0.plus(h_drive + h_neglected);
    return h0.plus(h_drive);
}

HarmonicOperator HamiltonianSet::system_hamiltonian(Dynamics dynamics) const {
    if (dynamics == Dynamics::frame_exact) return h0.plus(h_neglected);
    return h0;
}

HamiltonianSet build_hybrid(const HybridModel& model) {
    model.validate();
    const auto spin = spin_matrices(model.j);
    const Eigen::Index nf = model.field_dim();
    const ComplexMatrix id_f = identity(nf);
    const ComplexMatrix id_q = identity(2);

    const ComplexMatrix j_dot_sigma =
        tensor(spin.jx, sigma_x()) + tensor(spin.jy, sigma_y()) + tensor(spin.jz, sigma_z());

    // B(t).sigma = B cos(theta) sz + B sin(theta) (e^{-iwt} s+ + e^{+iwt} s-)
    const double bz = model.B * std::cos(model.theta);
    const double bperp = model.B * std::sin(model.theta);
    ComplexMatrix constant = -model.mu * j_dot_sigma - bz * tensor(id_f, sigma_z());
    ComplexMatrix positive = -bperp * tensor(id_f, sigma_plus());

    HamiltonianSet set;
    set.kind = model.is_classical() ? ModelKind::classical : ModelKind::hybrid;
    set.h0 = HarmonicOperator(std::move(constant), std::move(positive), model.omega);
    set.h_drive = model.omega * tensor(spin.jz - model.j.value() * id_f, id_q);
    set.h_neglected = tensor(id_f, 0.5 * model.omega * sigma_z());
    set.dim = 2 * nf;
    set.field_dim = nf;
    set.system = SystemFactor::second;
    set.omega = model.omega;

    Eigen::VectorXd gen(set.dim);
    Eigen::VectorXd label(set.dim);
    for (Eigen::Index k = 0; k < nf; ++k) {
        const double m = model.j.value() - static_cast<double>(k);
        for (int q = 0; q < 2; ++q) {
            const double s = q == 0 ? 0.5 : -0.5;
            gen(2 * k + q) = -model.j.value() + m + s;
            label(2 * k + q) = m + s;
        }
    }
    const ComplexMatrix ky = tensor(spin.jy, id_q) + tensor(id_f, 0.5 * sigma_y());
    set.frame = RotatingFrame(std::move(gen), model.omega, unitary_exp(ky, model.theta));
    set.static_label = std::move(label);
    return set;
}

HamiltonianSet build_oscillator(const OscillatorModel& model) {
    model.validate();
    const auto bos = boson_operators(model.n_max);
    const Eigen::Index nf = model.n_max + 1;
    const ComplexMatrix id_f = identity(nf);
    const ComplexMatrix id_q = identity(2);
    const ComplexMatrix number = bos.a_dagger * bos.a;
    const double bm = model.beta_mag;
    // The JC term is written with g/2 so that the 2x2 blocks mix with tan(alpha_n) = g sqrt(n+1) / nu.
    const double kappa = 0.5 * model.g;

    // b = a - |beta| e^{-iwt}
    ComplexMatrix constant = model.nu * tensor(number, id_q) +
                             model.nu * bm * bm * identity(2 * nf) +
                             kappa * (tensor(bos.a_dagger, sigma_minus()) + tensor(bos.a, sigma_plus()));
    ComplexMatrix positive =
        -model.nu * bm * tensor(bos.a_dagger, id_q) - kappa * bm * tensor(id_f, sigma_plus());

    HamiltonianSet set;
    set.kind = ModelKind::oscillator;
    set.h0 = HarmonicOperator(std::move(constant), std::move(positive), model.omega);
    set.h_drive = model.omega * tensor(id_f, 0.5 * (sigma_z() + id_q));
    set.h_neglected = model.omega * tensor(number, id_q);
    set.dim = 2 * nf;
    set.field_dim = nf;
    set.system = SystemFactor::first;
    set.omega = model.omega;

    Eigen::VectorXd gen(set.dim);
    for (Eigen::Index n = 0; n < nf; ++n) {
        gen(2 * n) = static_cast<double>(n) + 1.0;
        gen(2 * n + 1) = static_cast<double>(n);
    }
    set.static_label = gen;
    set.frame = RotatingFrame(std::move(gen), model.omega,
                              tensor(displacement(Complex(bm, 0.0), model.n_max), id_q));
    return set;
}

}  // namespace geophase
