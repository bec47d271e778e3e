#include "geophase/errors.hpp"
#include "geophase/operators.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace geophase;

TEST_CASE("half-integer arithmetic and parsing") {
    const auto h = HalfInteger::from_double(1.5);
    CHECK(h.twice() == 3);
    CHECK_FALSE(h.is_integer());
    CHECK((h + 1).value() == doctest::Approx(2.5));
    CHECK((-h).twice() == -3);
    CHECK(HalfInteger::from_double(-0.5) < HalfInteger::from_double(0.0));
    CHECK(h.str() == "3/2");
    CHECK(HalfInteger::from_double(2.0).str() == "2");
    CHECK_THROWS_AS(HalfInteger::from_double(0.3), InvalidParameter);
}

TEST_CASE("spin matrices match the ladder construction") {
    for (int tj = 0; tj <= 6; ++tj) {
        const auto s = spin_matrices(HalfInteger::from_twice(tj));
        const auto o = oracle::spin(tj);
        CHECK(max_abs(s.jx - o.jx) < 1e-14);
        CHECK(max_abs(s.jy - o.jy) < 1e-14);
        CHECK(max_abs(s.jz - o.jz) < 1e-14);
    }
}

TEST_CASE("spin matrix examples") {
    const auto half = spin_matrices(0.5);
    CHECK(max_abs(half.jz - 0.5 * sigma_z()) < 1e-15);
    CHECK(max_abs(half.jx - 0.5 * sigma_x()) < 1e-15);
    CHECK(max_abs(half.jy - 0.5 * sigma_y()) < 1e-15);

    const auto one = spin_matrices(1.0);
    Eigen::VectorXd expect(3);
    expect << 1.0, 0.0, -1.0;
    CHECK((one.jz.diagonal().real() - expect).norm() < 1e-15);

    const auto tq = spin_matrices(1.5);
    const ComplexMatrix casimir = tq.jx * tq.jx + tq.jy * tq.jy + tq.jz * tq.jz;
    CHECK(max_abs(casimir - 3.75 * identity(4)) < 1e-12);

    CHECK_THROWS_AS(spin_matrices(0.25), InvalidParameter);
    CHECK_THROWS_AS(spin_matrices(-1.0), InvalidParameter);
}

TEST_CASE("spin algebra: hermiticity, commutators, Casimir") {
    for (int tj = 1; tj <= 8; ++tj) {
        const auto s = spin_matrices(HalfInteger::from_twice(tj));
        const double j = 0.5 * tj;
        CHECK(hermiticity_defect(s.jx) < 1e-12);
        CHECK(hermiticity_defect(s.jy) < 1e-12);
        CHECK(hermiticity_defect(s.jz) < 1e-12);
        CHECK(max_abs(commutator(s.jx, s.jy) - kI * s.jz) < 1e-12);
        CHECK(max_abs(commutator(s.jy, s.jz) - kI * s.jx) < 1e-12);
        CHECK(max_abs(commutator(s.jz, s.jx) - kI * s.jy) < 1e-12);
        const ComplexMatrix c = s.jx * s.jx + s.jy * s.jy + s.jz * s.jz;
        CHECK(max_abs(c - j * (j + 1) * identity(tj + 1)) < 1e-10);
    }
}

TEST_CASE("Pauli and ladder conventions") {
    // qubit ordering: up, down
    CHECK(sigma_z()(0, 0) == Complex(1.0, 0.0));
    CHECK(sigma_plus()(0, 1) == Complex(1.0, 0.0));
    CHECK(max_abs(sigma_plus() + sigma_minus() - sigma_x()) < 1e-15);
    CHECK(max_abs(commutator(sigma_x(), sigma_y()) - 2.0 * kI * sigma_z()) < 1e-15);
}

TEST_CASE("boson operators") {
    const auto b = boson_operators(3);
    Eigen::VectorXd n(4);
    n << 0, 1, 2, 3;
    CHECK(((b.a_dagger * b.a).diagonal().real() - n).norm() < 1e-14);
    CHECK(max_abs(b.a_dagger * b.a - ComplexMatrix((b.a_dagger * b.a).diagonal().asDiagonal())) < 1e-14);

    // [a, a^dagger] is the identity except for the truncation corner
    const ComplexMatrix c = commutator(b.a, b.a_dagger);
    ComplexMatrix expect = identity(4);
    expect(3, 3) = -3.0;
    CHECK(max_abs(c - expect) < 1e-14);

    const auto big = boson_operators(60);
    StateVector five = StateVector::Zero(61);
    five(5) = 1.0;
    const StateVector out = big.a * five;
    CHECK(std::abs(out(4) - std::sqrt(5.0)) < 1e-14);
    CHECK((out - std::sqrt(5.0) * StateVector::Unit(61, 4)).norm() < 1e-14);

    CHECK_THROWS_AS(boson_operators(0), InvalidParameter);
}

TEST_CASE("displacement against a large-truncation matrix exponential") {
    CHECK(max_abs(displacement(Complex(0.0, 0.0), 20) - identity(21)) < 1e-15);

    const int big = 200;
    const auto b = boson_operators(big);
    const Complex beta(0.5, 0.0);
    const ComplexMatrix gen = beta * b.a_dagger - std::conj(beta) * b.a;
    const ComplexMatrix reference = gen.exp();

    const ComplexMatrix d = displacement(beta, 60);
    CHECK(std::abs(std::abs(d(0, 0)) - std::exp(-0.125)) < 1e-10);
    CHECK(std::abs(std::abs(d(0, 0)) - 0.88250) < 1e-5);
    // low Fock block agrees with the converged reference
    CHECK(max_abs(d.topLeftCorner(20, 20) - reference.topLeftCorner(20, 20)) < 1e-10);
    CHECK(max_abs(d.adjoint() * d - identity(61)) < 1e-8);

    const Complex tilted(0.3, -0.4);
    const ComplexMatrix dt = displacement(tilted, 60);
    const ComplexMatrix ref_t = (tilted * b.a_dagger - std::conj(tilted) * b.a).exp();
    CHECK(max_abs(dt.topLeftCorner(20, 20) - ref_t.topLeftCorner(20, 20)) < 1e-10);
}

TEST_CASE("displacement inverse within truncation") {
    for (double mag : {0.2, 0.5, 1.0}) {
        const Complex beta = std::polar(mag, 0.7);
        const ComplexMatrix prod = displacement(beta, 40) * displacement(-beta, 40);
        CHECK(max_abs(prod.topLeftCorner(20, 20) - identity(20)) < 1e-8);
    }
}

TEST_CASE("tensor product convention") {
    CHECK(max_abs(tensor(identity(2), identity(2)) - identity(4)) < 1e-15);
    const ComplexMatrix p = tensor(spin_matrices(0.5).jz, sigma_z());
    Eigen::VectorXd expect(4);
    expect << 0.5, -0.5, -0.5, 0.5;
    CHECK((p.diagonal().real() - expect).norm() < 1e-15);
    CHECK(max_abs(p - ComplexMatrix(p.diagonal().asDiagonal())) < 1e-15);

    const auto s = spin_matrices(1.0);
    CHECK(max_abs(tensor(s.jx, sigma_y()) - oracle::kron(s.jx, sigma_y())) < 1e-15);
    const ComplexMatrix left = tensor(tensor(s.jx, sigma_y()), sigma_plus());
    const ComplexMatrix right = tensor(s.jx, tensor(sigma_y(), sigma_plus()));
    CHECK(max_abs(left - right) < 1e-15);
}

TEST_CASE("unitary exponential") {
    const auto s = spin_matrices(1.5);
    const ComplexMatrix h = s.jx + 0.3 * s.jz * s.jz;
    CHECK(max_abs(unitary_exp(h, 0.77) - oracle::propagator(h, 0.77)) < 1e-12);
    CHECK_THROWS_AS(unitary_exp(s.jx + kI * s.jy, 1.0), InvalidInput);
}

TEST_CASE("normalization guard") {
    StateVector v = StateVector::Zero(3);
    v(0) = 1.0;
    CHECK_NOTHROW(require_normalized(v));
    v(1) = 1e-3;
    CHECK_THROWS_AS(require_normalized(v), InvalidInput);
}
