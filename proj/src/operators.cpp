#include "geophase/operators.hpp"

#include "geophase/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace geophase {

HalfInteger HalfInteger::from_double(double value) {
    const double twice = 2.0 * value;
    const double rounded = std::round(twice);
    if (!std::isfinite(value) || std::abs(twice - rounded) > 1e-9) {
        std::ostringstream os;
        os << "value " << value << " is not an integer or half-integer";
        throw InvalidParameter(os.str());
    }
    return HalfInteger(static_cast<int>(rounded));
}

std::string HalfInteger::str() const {
    if (is_integer()) return std::to_string(twice_ / 2);
    return std::to_string(twice_) + "/2";
}

ComplexMatrix identity(Eigen::Index dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix sigma_x() {
    ComplexMatrix s(2, 2);
    s << 0.0, 1.0, 1.0, 0.0;
    return s;
}

ComplexMatrix sigma_y() {
    ComplexMatrix s(2, 2);
    s << 0.0, -kI, kI, 0.0;
    return s;
}

ComplexMatrix sigma_z() {
    ComplexMatrix s(2, 2);
    s << 1.0, 0.0, 0.0, -1.0;
    return s;
}

ComplexMatrix sigma_plus() {
    ComplexMatrix s = ComplexMatrix::Zero(2, 2);
    s(0, 1) = 1.0;
    return s;
}

ComplexMatrix sigma_minus() {
    ComplexMatrix s = ComplexMatrix::Zero(2, 2);
    s(1, 0) = 1.0;
    return s;
}

SpinMatrices spin_matrices(HalfInteger j) {
    if (j.twice() < 0) throw InvalidParameter("spin j must be non-negative");
    const int dim = j.twice() + 1;
    const double jj = j.value();
    ComplexMatrix jp = ComplexMatrix::Zero(dim, dim);
    ComplexMatrix jz = ComplexMatrix::Zero(dim, dim);
    // index k <-> m = j - k
    for (int k = 0; k < dim; ++k) {
        const double m = jj - k;
        jz(k, k) = m;
        if (k > 0) {
            // J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>, and |m+1> sits at index k-1
            jp(k - 1, k) = std::sqrt(jj * (jj + 1.0) - m * (m + 1.0));
        }
    }
    const ComplexMatrix jm = jp.adjoint();
    return SpinMatrices{0.5 * (jp + jm), -0.5 * kI * (jp - jm), jz};
}

SpinMatrices spin_matrices(double j) { return spin_matrices(HalfInteger::from_double(j)); }

BosonOperators boson_operators(int n_max) {
    if (n_max < 1) throw InvalidParameter("boson truncation n_max must be >= 1");
    ComplexMatrix a = ComplexMatrix::Zero(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    ComplexMatrix ad = a.adjoint();
    return BosonOperators{std::move(a), std::move(ad)};
}

ComplexMatrix displacement(Complex beta, int n_max) {
    const auto ops = boson_operators(n_max);
    // beta a+ - beta* a = -i G with G = i (beta a+ - beta* a) hermitian
    const ComplexMatrix g = kI * (beta * ops.a_dagger - std::conj(beta) * ops.a);
    return unitary_exp(g, 1.0);
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

ComplexMatrix unitary_exp(const ComplexMatrix& hermitian, double scale) {
    if (hermiticity_defect(hermitian) > 1e-9 * std::max(1.0, max_abs(hermitian)))
        throw InvalidInput("unitary_exp: matrix is not hermitian");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("unitary_exp: eigen decomposition failed");
    const Eigen::VectorXd& w = solver.eigenvalues();
    Eigen::VectorXcd phases(w.size());
    for (Eigen::Index k = 0; k < w.size(); ++k) phases(k) = std::exp(-kI * (scale * w(k)));
    const ComplexMatrix& v = solver.eigenvectors();
    return v * phases.asDiagonal() * v.adjoint();
}

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double hermiticity_defect(const ComplexMatrix& m) { return max_abs(m - m.adjoint()); }

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

void require_normalized(const StateVector& psi, double tol) {
    const double n = psi.norm();
    if (std::abs(n - 1.0) > tol) {
        std::ostringstream os;
        os << "state is not normalized (norm = " << n << ")";
        throw InvalidInput(os.str());
    }
}

}  // namespace geophase
