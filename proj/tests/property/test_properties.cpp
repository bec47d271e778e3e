// test_properties.cpp — randomized and grid checks over model parameters.

#include "geophase/errors.hpp"
#include "geophase/evolution.hpp"
#include "geophase/nonsep.hpp"
#include "geophase/phases.hpp"
#include "geophase/spectra.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>

using namespace geophase;
using oracle::pi;

namespace {

HybridModel random_hybrid(oracle::Rng& rng, int twice_j) {
    HybridModel m;
    m.B = rng.uniform(0.2, 2.0);
    m.theta = rng.uniform(0.0, pi);
    m.mu = rng.uniform(0.05, 1.5);
    m.j = HalfInteger::from_twice(twice_j);
    m.omega = 1e-2;
    return m;
}

ComplexMatrix random_unitary(oracle::Rng& rng, Eigen::Index dim) {
    ComplexMatrix a(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c) a(r, c) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const ComplexMatrix h = 0.5 * (a + a.adjoint());
    return oracle::propagator(h, rng.uniform(0.1, 3.0));
}

}  // namespace

TEST_CASE("closed-form spectrum agrees with direct diagonalization on random draws") {
    oracle::Rng rng(20240611);
    for (int draw = 0; draw < 60; ++draw) {
        const int twice_j = rng.integer(1, 4);
        auto model = random_hybrid(rng, twice_j);
        model.omega = rng.uniform(1e-3, 0.5);
        const auto set = build_hybrid(model);
        const double t = rng.uniform(0.0, set.period());
        const ComplexMatrix h = set.h0_at(t);
        const double scale = h.norm();
        CAPTURE(draw);
        CAPTURE(twice_j);

        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
        std::vector<double> closed;
        for (const auto& [m, br] : hybrid_branches(model)) {
            const auto eb = hybrid_eigensystem(model, m, br);
            const StateVector v = eb.ket_at(t);
            closed.push_back(eb.energy);
            CHECK((h * v - eb.energy * v).norm() < 1e-9 * scale);

            // nearest direct eigenvector, when its eigenvalue is isolated
            Eigen::Index best = 0;
            (solver.eigenvalues().array() - eb.energy).abs().minCoeff(&best);
            const auto& ev = solver.eigenvalues();
            double gap = INFINITY;
            for (Eigen::Index k = 0; k < ev.size(); ++k)
                if (k != best) gap = std::min(gap, std::abs(ev(k) - ev(best)));
            if (gap > 1e-6 * scale) CHECK(overlap_magnitude(solver.eigenvectors().col(best), v) > 1 - 1e-8);
        }
        std::sort(closed.begin(), closed.end());
        REQUIRE(closed.size() == static_cast<std::size_t>(solver.eigenvalues().size()));
        for (std::size_t k = 0; k < closed.size(); ++k)
            CHECK(std::abs(closed[k] - solver.eigenvalues()(static_cast<Eigen::Index>(k))) < 1e-9 * scale);
    }
}

TEST_CASE("oscillator kets are eigenvectors on random draws") {
    oracle::Rng rng(7);
    for (int draw = 0; draw < 12; ++draw) {
        OscillatorModel model;
        model.nu = rng.uniform(0.5, 2.0);
        model.g = rng.uniform(0.1, 1.5);
        model.beta_mag = rng.uniform(0.0, 1.0);
        model.omega = 1e-3 * model.nu;
        const int n = rng.integer(-1, 3);
        model.n_max = OscillatorModel::required_n_max(n, model.beta_mag) + 20;
        const auto set = build_oscillator(model);
        const double t = rng.uniform(0.0, set.period());
        const ComplexMatrix h = set.h0_at(t);
        CAPTURE(draw);
        for (const auto br : {Branch::plus, Branch::minus}) {
            if (n == -1 && br == Branch::plus) continue;
            const auto eb = oscillator_eigensystem(model, n, br);
            const StateVector v = eb.ket_at(t);
            CHECK((h * v - eb.energy * v).norm() < 1e-8 * model.nu);
        }
    }
}

TEST_CASE("entanglement bound holds on the (theta, alpha) grid") {
    for (int it = 0; it <= 6; ++it) {
        for (int ia = 0; ia <= 4; ++ia) {
            const double theta = it * pi / 12;
            const double alpha = ia * pi / 8;
            CAPTURE(theta);
            CAPTURE(alpha);
            CHECK(std::sin(alpha) <= hybrid_action_closed(theta, alpha) / (2 * pi) + 1e-12);

            HybridModel m;
            m.B = std::cos(alpha);
            m.mu = std::sin(alpha);
            m.theta = theta;
            m.omega = 1e-2;
            if (ia == 4) m.B = 0.0;
            ReportOptions o;
            o.kinematic = false;
            const auto r = complementarity_report(m, HalfInteger::from_twice(-1), Branch::minus, o);
            CHECK(r.concurrence == doctest::Approx(std::sin(alpha)).epsilon(1e-9));
            CHECK(r.concurrence <= r.action / (2 * pi) + 1e-6);
            CHECK(r.action == doctest::Approx(r.action_closed).epsilon(1e-4).scale(1));
            if (r.equality_case) CHECK(std::abs(r.concurrence - r.action / (2 * pi)) < 1e-6);
        }
    }
}

TEST_CASE("frame-exact dynamics keep random hybrid eigenstates") {
    oracle::Rng rng(99);
    for (int draw = 0; draw < 9; ++draw) {
        const int twice_j = 1 + draw % 3;
        auto model = random_hybrid(rng, twice_j);
        model.omega = rng.uniform(1e-2, 0.5) * model.B;
        const auto branches = hybrid_branches(model);
        const auto [m, br] = branches[static_cast<std::size_t>(rng.integer(0, static_cast<int>(branches.size()) - 1))];
        const auto set = build_hybrid(model);
        const auto eb = hybrid_eigensystem(model, m, br);
        const auto traj = evolve(set, eb.ket_at(0.0), set.period(), 1e-10);
        double worst = 1.0;
        for (const auto& [t, f] : instantaneous_fidelity(traj, eb)) worst = std::min(worst, f);
        CAPTURE(draw);
        CHECK(worst > 1 - 1e-7);
    }
}

TEST_CASE("evolution is linear") {
    oracle::Rng rng(5);
    auto model = random_hybrid(rng, 2);
    model.omega = 0.2;
    const auto set = build_hybrid(model);
    const auto a = rng.state(set.dim);
    const auto b = rng.state(set.dim);
    const Complex ca(0.6, 0.3), cb(-0.2, 0.7);
    const StateVector mix = ca * a + cb * b;
    const double n = mix.norm();
    const double t_end = 0.7 * set.period();
    const auto ta = evolve(set, a, t_end, 1e-11);
    const auto tb = evolve(set, b, t_end, 1e-11);
    const auto tm = evolve(set, mix / n, t_end, 1e-11);
    const StateVector expected = (ca * ta.states.back() + cb * tb.states.back()) / n;
    CHECK((tm.states.back() - expected).norm() < 1e-8);
}

TEST_CASE("two periods equal one period composed with itself") {
    oracle::Rng rng(11);
    auto model = random_hybrid(rng, 1);
    model.omega = 0.1;
    const auto set = build_hybrid(model);
    const auto psi = rng.state(set.dim);
    const auto whole = evolve(set, psi, 2 * set.period(), 1e-11);
    const auto first = evolve(set, psi, set.period(), 1e-11);
    EvolveOptions o;
    o.t_start = set.period();
    const auto second = evolve(set, first.states.back(), 2 * set.period(), 1e-11, o);
    CHECK(second.times.front() == doctest::Approx(set.period()));
    CHECK((whole.states.back() - second.states.back()).norm() < 1e-8);

    // H(t) has period tau, so the second leg equals the first leg applied again
    const auto again = evolve(set, first.states.back(), set.period(), 1e-11);
    CHECK((again.states.back() - second.states.back()).norm() < 1e-8);
}

TEST_CASE("concurrence is invariant under local unitaries") {
    oracle::Rng rng(3);
    for (int draw = 0; draw < 40; ++draw) {
        const Eigen::Index field_dim = rng.integer(1, 5);
        const auto psi = rng.state(2 * field_dim);
        const ComplexMatrix local = oracle::kron(random_unitary(rng, field_dim), random_unitary(rng, 2));
        const StateVector moved = local * psi;
        CAPTURE(draw);
        CHECK(std::abs(concurrence(moved, field_dim) - concurrence(psi, field_dim)) < 1e-10);
        // squared: the determinant oracle carries rounding noise under its square root
        CHECK(std::abs(std::pow(concurrence(psi, field_dim), 2) - std::pow(oracle::concurrence(psi), 2)) < 1e-12);
    }
}

TEST_CASE("cyclic geometric phase is gauge invariant") {
    oracle::Rng rng(17);
    for (int draw = 0; draw < 5; ++draw) {
        auto model = random_hybrid(rng, 1 + draw % 2);
        model.omega = 0.05;
        const auto set = build_hybrid(model);
        const auto [m, br] = hybrid_branches(model).front();
        const auto eb = hybrid_eigensystem(model, m, br);
        const auto h_sys = set.system_hamiltonian();
        const auto traj = evolve(set, eb.ket_at(0.0), set.period(), 1e-10);
        const auto base = cyclic_phase_decomposition(traj, h_sys);

        // constant phase on the initial state
        const Complex z = std::polar(1.0, rng.uniform(-pi, pi));
        const auto shifted = evolve(set, z * eb.ket_at(0.0), set.period(), 1e-10);
        CHECK(std::abs(wrap_phase(cyclic_phase_decomposition(shifted, h_sys).gamma - base.gamma)) < 1e-9);

        // time-dependent phase along the stored path: only the endpoints and <H> change
        auto regauged = traj;
        for (std::size_t i = 0; i < regauged.size(); ++i)
            regauged.states[i] *= std::polar(1.0, 0.3 * std::sin(model.omega * regauged.times[i]));
        CHECK(std::abs(wrap_phase(cyclic_phase_decomposition(regauged, h_sys).gamma - base.gamma)) < 1e-12);
    }
}
