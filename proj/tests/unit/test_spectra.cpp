#include "geophase/errors.hpp"
#include "geophase/spectra.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace geophase;
using oracle::pi;

namespace {

HybridModel hybrid(double B, double theta, double mu, int twice_j) {
    HybridModel m;
    m.B = B;
    m.theta = theta;
    m.mu = mu;
    m.j = HalfInteger::from_twice(twice_j);
    return m;
}

double residual(const ComplexMatrix& h, const StateVector& v, double e) { return (h * v - e * v).norm(); }

}  // namespace

TEST_CASE("hybrid mixing angle examples") {
    const auto m = hybrid(1, pi / 3, 1, 1);
    const auto eb = hybrid_eigensystem(m, HalfInteger::from_twice(-1), Branch::minus);
    CHECK(eb.alpha == doctest::Approx(pi / 4).epsilon(1e-14));
    CHECK(std::tan(eb.alpha) == doctest::Approx(1.0));

    // B + mu (m + 1/2) < 0 maps to alpha in (pi/2, pi]
    const auto strong = hybrid(0.2, 0.3, 1.0, 3);
    const double a = hybrid_mixing_angle(strong, HalfInteger::from_twice(-3));
    CHECK(a > pi / 2);
    CHECK(a <= pi);
}

TEST_CASE("hybrid edge states are product states with a single branch") {
    const auto m = hybrid(1, 0.7, 0.8, 3);
    const auto set = build_hybrid(m);
    const auto j = m.j;
    const auto top = hybrid_eigensystem(m, j, Branch::plus);
    CHECK(top.edge);
    CHECK(top.alpha == 0.0);
    CHECK(top.static_ket(0) == Complex(1.0, 0.0));  // |j, up>
    CHECK(top.energy == doctest::Approx(-m.mu * 1.5 - m.B));
    const auto bottom = hybrid_eigensystem(m, -(j + 1), Branch::minus);
    CHECK(bottom.edge);
    CHECK(bottom.static_ket(set.dim - 1) == Complex(1.0, 0.0));  // |-j, down>
    CHECK(bottom.energy == doctest::Approx(-m.mu * 1.5 + m.B));
    for (double t : {0.0, 100.0}) {
        CHECK(residual(set.h0_at(t), top.ket_at(t), top.energy) < 1e-12);
        CHECK(residual(set.h0_at(t), bottom.ket_at(t), bottom.energy) < 1e-12);
    }
    CHECK_THROWS_AS(hybrid_eigensystem(m, j, Branch::minus), EdgeBranchError);
    CHECK_THROWS_AS(hybrid_eigensystem(m, -(j + 1), Branch::plus), EdgeBranchError);
    CHECK_THROWS_AS(hybrid_eigensystem(m, j + 1, Branch::plus), IndexError);
    CHECK_THROWS_AS(hybrid_eigensystem(m, -(j + 2), Branch::minus), IndexError);
    CHECK_THROWS_AS(hybrid_eigensystem(m, HalfInteger::from_twice(0), Branch::plus), IndexError);  // wrong parity
}

TEST_CASE("classical limit: alpha = 0 and energies -+B") {
    for (int tj : {0, 1, 2}) {
        const auto m = hybrid(1.3, 0.9, 0.0, tj);
        for (const auto& [idx, br] : hybrid_branches(m)) {
            const auto eb = hybrid_eigensystem(m, idx, br);
            CHECK(eb.alpha == doctest::Approx(0.0));
            CHECK(eb.energy == doctest::Approx(br == Branch::plus ? -1.3 : 1.3));
        }
    }
}

TEST_CASE("hybrid kets are eigenvectors of H0(t) at all times") {
    const auto m = hybrid(0.9, 1.2, 0.7, 3);
    const auto set = build_hybrid(m);
    const double scale = set.h0_at(0).norm();
    for (const auto& [idx, br] : hybrid_branches(m)) {
        const auto eb = hybrid_eigensystem(m, idx, br);
        for (double t : {0.0, 13.0, 250.0}) {
            const StateVector k = eb.ket_at(t);
            CHECK(std::abs(k.norm() - 1.0) < 1e-12);
            CHECK(residual(set.h0_at(t), k, eb.energy) < 1e-8 * scale);
        }
    }
}

TEST_CASE("numeric eigensystem reproduces the closed-form hybrid spectrum") {
    const auto m = hybrid(1, 0.0, 1, 1);
    const auto set = build_hybrid(m);
    const auto numeric = numeric_eigensystem(set.h0_at(0), set.conserved_label_at(0));
    REQUIRE(numeric.size() == 4);
    std::vector<double> closed;
    for (const auto& [idx, br] : hybrid_branches(m)) closed.push_back(hybrid_eigensystem(m, idx, br).energy);
    std::sort(closed.begin(), closed.end());
    std::vector<double> found;
    for (const auto& p : numeric) found.push_back(p.energy);
    std::sort(found.begin(), found.end());
    for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(found[k] - closed[k]) < 1e-10);
}

TEST_CASE("numeric eigensystem: classical degeneracy and labels") {
    const auto m = hybrid(1, 0.4, 0.0, 2);
    const auto set = build_hybrid(m);
    const auto numeric = numeric_eigensystem(set.h0_at(1.0), set.conserved_label_at(1.0));
    int low = 0;
    int high = 0;
    for (const auto& p : numeric) {
        if (std::abs(p.energy + 1.0) < 1e-10) ++low;
        if (std::abs(p.energy - 1.0) < 1e-10) ++high;
        CHECK(p.block_size <= 2);
    }
    CHECK(low == 3);
    CHECK(high == 3);
}

TEST_CASE("numeric eigensystem: gauge fixing and error reporting") {
    const auto m = hybrid(1, 0.8, 0.6, 1);
    const auto set = build_hybrid(m);
    for (const auto& p : numeric_eigensystem(set.h0_at(2.0), set.conserved_label_at(2.0))) {
        for (Eigen::Index i = 0; i < p.vector.size(); ++i) {
            if (std::abs(p.vector(i)) > 1e-8) {
                CHECK(std::abs(p.vector(i).imag()) < 1e-14);
                CHECK(p.vector(i).real() > 0.0);
                break;
            }
        }
    }
    ComplexMatrix bad = set.h0_at(0);
    bad(0, 1) += 0.1;
    CHECK_THROWS_AS(numeric_eigensystem(bad, set.conserved_label_at(0)), InvalidInput);
    CHECK_THROWS_AS(numeric_eigensystem(set.h0_at(0), tensor(identity(2), sigma_x())), LabelingError);
}

TEST_CASE("oscillator eigensystem examples") {
    OscillatorModel m;
    m.n_max = 30;
    const auto eb = oscillator_eigensystem(m, 0, Branch::minus);
    CHECK(eb.alpha == doctest::Approx(pi / 4));

    const auto ground = oscillator_eigensystem(m, -1, Branch::minus);
    CHECK(ground.edge);
    CHECK(ground.static_ket(1) == Complex(1.0, 0.0));  // |0, down>
    CHECK(ground.energy == 0.0);
    CHECK_THROWS_AS(oscillator_eigensystem(m, -1, Branch::plus), EdgeBranchError);
    CHECK_THROWS_AS(oscillator_eigensystem(m, -2, Branch::minus), IndexError);
    CHECK_THROWS_AS(oscillator_eigensystem(m, 30, Branch::minus), IndexError);
    CHECK_THROWS_AS(oscillator_eigensystem(m, 25, Branch::minus), InvalidParameter);  // truncation too small

    m.g = 0.0;
    const auto flat = oscillator_eigensystem(m, 2, Branch::plus);
    CHECK(flat.alpha == 0.0);
}

TEST_CASE("oscillator kets are eigenvectors of H0(t) on the converged block") {
    OscillatorModel m;
    m.n_max = 40;
    m.omega = 0.01;
    const auto set = build_oscillator(m);
    for (const auto& [n, br] : oscillator_branches(m, 4)) {
        const auto eb = oscillator_eigensystem(m, n, br);
        for (double t : {0.0, 200.0}) {
            const StateVector k = eb.ket_at(t);
            CHECK(std::abs(k.norm() - 1.0) < 1e-10);
            CHECK(residual(set.h0_at(t), k, eb.energy) < 1e-8);
        }
    }
}

TEST_CASE("oscillator numeric spectrum at zero displacement") {
    OscillatorModel m;
    m.beta_mag = 0.0;
    m.n_max = 60;
    const auto set = build_oscillator(m);
    const auto numeric = numeric_eigensystem(set.h0_at(0), set.conserved_label_at(0));
    const auto eb = oscillator_eigensystem(m, 0, Branch::minus);
    const auto eb_plus = oscillator_eigensystem(m, 0, Branch::plus);
    // label 1 block: |0 up>, |1 down>
    std::vector<const NumericEigenpair*> block;
    for (const auto& p : numeric)
        if (std::abs(p.label - 1.0) < 1e-9) block.push_back(&p);
    REQUIRE(block.size() == 2);
    CHECK(std::abs(block[1]->energy - block[0]->energy - 2.0 * std::sqrt(0.25 + 0.25)) < 1e-10);
    CHECK(std::abs(block[0]->energy - eb_plus.energy) < 1e-10);
    CHECK(overlap_magnitude(block[1]->vector, eb.ket_at(0)) > 1 - 1e-8);
    CHECK(overlap_magnitude(block[0]->vector, eb_plus.ket_at(0)) > 1 - 1e-8);
}

TEST_CASE("oscillator mixing angle increases with n") {
    OscillatorModel m;
    double prev = -1.0;
    for (int n = -1; n < 20; ++n) {
        const double a = oscillator_mixing_angle(m, n);
        CHECK(a > prev);
        CHECK(a < pi / 2);
        prev = a;
    }
}

TEST_CASE("branch enumeration and completeness") {
    for (int tj : {0, 1, 2, 3}) {
        const auto m = hybrid(0.6, 1.0, 0.9, tj);
        const auto set = build_hybrid(m);
        const auto branches = hybrid_branches(m);
        CHECK(static_cast<Eigen::Index>(branches.size()) == set.dim);
        ComplexMatrix sum = ComplexMatrix::Zero(set.dim, set.dim);
        for (const auto& [idx, br] : branches) {
            const StateVector k = hybrid_eigensystem(m, idx, br).ket_at(3.0);
            sum += k * k.adjoint();
        }
        CHECK(max_abs(sum - identity(set.dim)) < 1e-8);
    }
}

TEST_CASE("rotating-frame eigenstate stays close to the branch ket") {
    const auto m = HybridModel::classical(1.0, pi / 3, 1e-3);
    const auto set = build_hybrid(m);
    const auto eb = hybrid_eigensystem(m, HalfInteger::from_twice(-2), Branch::minus);
    const StateVector r = rotating_frame_eigenstate(set, eb);
    const double o = overlap_magnitude(r, eb.ket_at(0));
    CHECK(o > 1 - 1e-6);
    CHECK(o < 1.0);
    CHECK(std::abs(r.dot(eb.ket_at(0)).imag()) < 1e-12);
    const ComplexMatrix hr = set.h0_at(0) - set.h_neglected;
    const double e = r.dot(hr * r).real();
    CHECK(residual(hr, r, e) < 1e-12);
}
