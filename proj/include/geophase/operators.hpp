// operators.hpp — finite-dimensional operator algebra: spin-j, Pauli, truncated boson
//
// Basis conventions used everywhere in the library:
//   spin-j   : J_z eigenbasis ordered m = j, j-1, ..., -j
//   Fock     : n = 0, 1, ..., n_max
//   qubit    : |up> then |down>
//   composite: field factor first, qubit factor second (Kronecker order)

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>

namespace geophase {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

// Integer or half-integer quantity stored as twice its value (spin j, projection m).
class HalfInteger {
public:
    constexpr HalfInteger() = default;
    static constexpr HalfInteger from_twice(int twice) { return HalfInteger(twice); }
    // Throws InvalidParameter unless 2*value is an integer (within 1e-9).
    static HalfInteger from_double(double value);

    constexpr int twice() const noexcept { return twice_; }
    constexpr double value() const noexcept { return 0.5 * twice_; }
    constexpr bool is_integer() const noexcept { return twice_ % 2 == 0; }

    constexpr HalfInteger operator+(int k) const noexcept { return HalfInteger(twice_ + 2 * k); }
    constexpr HalfInteger operator-(int k) const noexcept { return HalfInteger(twice_ - 2 * k); }
    constexpr HalfInteger operator-() const noexcept { return HalfInteger(-twice_); }
    constexpr auto operator<=>(const HalfInteger&) const = default;

    std::string str() const;

private:
    constexpr explicit HalfInteger(int twice) : twice_(twice) {}
    int twice_{0};
};

struct SpinMatrices {
    ComplexMatrix jx;
    ComplexMatrix jy;
    ComplexMatrix jz;
};

struct BosonOperators {
    ComplexMatrix a;
    ComplexMatrix a_dagger;
};

ComplexMatrix identity(Eigen::Index dim);

ComplexMatrix sigma_x();
ComplexMatrix sigma_y();
ComplexMatrix sigma_z();
// |up><down| and |down><up| in the qubit ordering (up, down).
ComplexMatrix sigma_plus();
ComplexMatrix sigma_minus();

SpinMatrices spin_matrices(HalfInteger j);
SpinMatrices spin_matrices(double j);

BosonOperators boson_operators(int n_max);

// exp(beta a^dagger - conj(beta) a) on the truncated Fock space.
ComplexMatrix displacement(Complex beta, int n_max);

// Kronecker product A (x) B; A is the slow (outer) index.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

// exp(-i * scale * H) for hermitian H, via its spectral decomposition.
ComplexMatrix unitary_exp(const ComplexMatrix& hermitian, double scale);

double max_abs(const ComplexMatrix& m);
double hermiticity_defect(const ComplexMatrix& m);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

// Throws InvalidInput when |1 - ||psi||| > tol.
void require_normalized(const StateVector& psi, double tol = 1e-10);

}  // namespace geophase
