#include "geophase/errors.hpp"
#include "geophase/evolution.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace geophase;
using oracle::pi;

namespace {

HybridModel hybrid(double B, double theta, double mu, int twice_j, double omega) {
    HybridModel m;
    m.B = B;
    m.theta = theta;
    m.mu = mu;
    m.j = HalfInteger::from_twice(twice_j);
    m.omega = omega;
    return m;
}

double min_fid(const Trajectory& traj, const EigenBranch& eb) {
    double out = 1.0;
    for (const auto& [t, f] : instantaneous_fidelity(traj, eb)) out = std::min(out, f);
    return out;
}

}  // namespace

TEST_CASE("sample grid") {
    const auto g = sample_grid(0.0, 2 * pi, 1.0, 400);
    CHECK(g.size() == 401);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == doctest::Approx(2 * pi));
    const auto odd = sample_grid(0.0, 1.01 * 2 * pi, 1.0, 400);
    CHECK((odd.size() - 1) % 2 == 0);
    CHECK(odd.size() - 1 >= 404);
    CHECK_THROWS_AS(sample_grid(0.0, 1.0, 1.0, 399), InvalidParameter);
}

TEST_CASE("time-independent Hamiltonian matches the matrix exponential") {
    // mu = 0, theta = 0: H_total is constant
    const auto m = hybrid(1.0, 0.0, 0.0, 2, 0.05);
    const auto set = build_hybrid(m);
    const ComplexMatrix h = set.generator().at(0.0);
    CHECK(max_abs(set.generator().at(3.0) - h) < 1e-15);
    const StateVector psi0 = oracle::Rng(11).state(set.dim);
    for (bool ip : {true, false}) {
        const auto traj = evolve(set.generator(), psi0, sample_grid(0.0, 40.0, m.omega, 400), 1e-10, ip);
        for (std::size_t i = 0; i < traj.size(); i += 37) {
            const StateVector ref = oracle::propagator(h, traj.times[i]) * psi0;
            CHECK((traj.states[i] - ref).norm() < 1e-8);
        }
    }
}

TEST_CASE("driven qubit against a piecewise matrix-exponential propagator") {
    const auto m = hybrid(1.0, 1.0, 0.7, 1, 0.4);
    const auto set = build_hybrid(m);
    const auto gen = set.generator();
    const StateVector psi0 = oracle::Rng(5).state(set.dim);
    const double t_end = 6.0;
    const auto traj = evolve(gen, psi0, sample_grid(0.0, t_end, m.omega, 400), 1e-11);
    // midpoint exponential product, refined until converged
    const int steps = 20000;
    const double dt = t_end / steps;
    StateVector ref = psi0;
    for (int k = 0; k < steps; ++k) ref = oracle::propagator(gen.at((k + 0.5) * dt), dt) * ref;
    CHECK((traj.states.back() - ref).norm() < 1e-7);
}

TEST_CASE("hybrid eigenstate is carried exactly by the frame") {
    for (double omega : {0.5, 0.05, 1e-3}) {
        const auto m = hybrid(1.0, pi / 3, 1.0, 1, omega);
        const auto set = build_hybrid(m);
        const auto eb = hybrid_eigensystem(m, HalfInteger::from_twice(-1), Branch::minus);
        const auto traj = evolve(set, eb.ket_at(0.0), set.period(), 1e-10);
        CHECK(traj.times.front() == 0.0);
        CHECK(traj.t_end() == doctest::Approx(set.period()));
        CHECK(min_fid(traj, eb) > 1 - 1e-7);
        CHECK(traj.norm_drift < 10 * traj.tolerance);
        const auto other = hybrid_eigensystem(m, HalfInteger::from_twice(-1), Branch::plus);
        double worst = 0.0;
        for (const auto& [t, f] : instantaneous_fidelity(traj, other)) worst = std::max(worst, f);
        CHECK(worst < 1e-6);
        CHECK(instantaneous_fidelity(traj, eb).front().second == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("oscillator eigenstate is carried by the frame") {
    OscillatorModel m;
    m.n_max = 24;
    m.omega = 1e-2;
    const auto set = build_oscillator(m);
    const auto eb = oscillator_eigensystem(m, 0, Branch::minus);
    const auto traj = evolve(set, eb.ket_at(0.0), set.period(), 1e-10);
    CHECK(min_fid(traj, eb) > 1 - 1e-4);
    CHECK(min_fid(traj, eb) > 1 - 1e-7);
}

TEST_CASE("bare route is only adiabatic: defect quarters when omega halves") {
    double defect[2];
    int i = 0;
    for (double omega : {2e-2, 1e-2}) {
        OscillatorModel m;
        m.n_max = 24;
        m.omega = omega;
        const auto set = build_oscillator(m);
        const auto eb = oscillator_eigensystem(m, 0, Branch::minus);
        EvolveOptions o;
        o.dynamics = Dynamics::bare;
        const auto traj = evolve(set, rotating_frame_eigenstate(set, eb), set.period(), 1e-10, o);
        defect[i++] = 1.0 - min_fid(traj, eb);
    }
    CHECK(defect[0] < 1e-3);
    CHECK(defect[1] / defect[0] == doctest::Approx(0.25).epsilon(0.1));
}

TEST_CASE("norm drift stays below ten times the tolerance") {
    for (double tol : {1e-6, 1e-8, 1e-10, 1e-12}) {
        const auto m = hybrid(1.0, 0.8, 0.5, 3, 0.02);
        const auto set = build_hybrid(m);
        const auto traj = evolve(set, oracle::Rng(7).state(set.dim), set.period(), tol);
        CHECK(traj.norm_drift < 10 * tol);
        CHECK(traj.accepted_steps > 0);
    }
}

TEST_CASE("evolution is deterministic") {
    const auto m = hybrid(1.0, 0.8, 0.5, 1, 0.02);
    const auto set = build_hybrid(m);
    const StateVector psi0 = oracle::Rng(9).state(set.dim);
    const auto a = evolve(set, psi0, set.period(), 1e-9);
    const auto b = evolve(set, psi0, set.period(), 1e-9);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK((a.states[i] - b.states[i]).norm() == 0.0);
}

TEST_CASE("evolution input validation") {
    const auto m = hybrid(1.0, 0.8, 0.5, 1, 0.02);
    const auto set = build_hybrid(m);
    const StateVector psi0 = oracle::Rng(1).state(set.dim);
    CHECK_THROWS_AS(evolve(set, psi0, set.period(), 1e-3), InvalidParameter);
    CHECK_THROWS_AS(evolve(set, psi0, set.period(), 1e-13), InvalidParameter);
    CHECK_THROWS_AS(evolve(set, StateVector(2.0 * psi0), set.period(), 1e-8), InvalidInput);
    CHECK_THROWS_AS(evolve(set, oracle::Rng(1).state(3), set.period(), 1e-8), InvalidInput);
    const auto grid = sample_grid(0.0, set.period(), m.omega, 400);
    CHECK_THROWS_AS(evolve(set.generator(), psi0, grid, 1e-10, true, 5), StiffnessError);
    try {
        evolve(set.generator(), psi0, grid, 1e-10, true, 5);
    } catch (const StiffnessError& e) {
        CHECK(e.time() > 0.0);
        CHECK(e.time() < set.period());
    }
}

TEST_CASE("long spans finish without step underflow near the end") {
    const auto m = HybridModel::classical(1.0, 0.785398163397, 1e-3);
    const auto set = build_hybrid(m);
    const auto eb = hybrid_eigensystem(m, HalfInteger::from_twice(-2), Branch::minus);
    const auto traj = evolve(set, eb.ket_at(0.0), 16 * set.period(), 1e-10);
    CHECK(traj.t_end() == doctest::Approx(16 * set.period()));
    CHECK(traj.norm_drift < 1e-8);
}
