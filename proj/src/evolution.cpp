#include "geophase/evolution.hpp"

#include "geophase/errors.hpp"

#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace geophase {

namespace {

// Dormand-Prince 8(5,3) coefficients (Hairer & Wanner, dop853).
namespace dp {
constexpr double c2 = 0.526001519587677318785587544488e-01;
constexpr double c3 = 0.789002279381515978178381316732e-01;
constexpr double c4 = 0.118350341907227396726757197510e+00;
constexpr double c5 = 0.281649658092772603273242802490e+00;
constexpr double c6 = 0.333333333333333333333333333333e+00;
constexpr double c7 = 0.25e+00;
constexpr double c8 = 0.307692307692307692307692307692e+00;
constexpr double c9 = 0.651282051282051282051282051282e+00;
constexpr double c10 = 0.6e+00;
constexpr double c11 = 0.857142857142857142857142857142e+00;
constexpr double c14 = 0.1e+00;
constexpr double c15 = 0.2e+00;
constexpr double c16 = 0.777777777777777777777777777778e+00;

constexpr double a21 = 5.26001519587677318785587544488e-2;
constexpr double a31 = 1.97250569845378994544595329183e-2;
constexpr double a32 = 5.91751709536136983633785987549e-2;
constexpr double a41 = 2.95875854768068491816892993775e-2;
constexpr double a43 = 8.87627564304205475450678981324e-2;
constexpr double a51 = 2.41365134159266685502369798665e-1;
constexpr double a53 = -8.84549479328286085344864962717e-1;
constexpr double a54 = 9.24834003261792003115737966543e-1;
constexpr double a61 = 3.7037037037037037037037037037e-2;
constexpr double a64 = 1.70828608729473871279604482173e-1;
constexpr double a65 = 1.25467687566822425016691814123e-1;
constexpr double a71 = 3.7109375e-2;
constexpr double a74 = 1.70252211019544039314978060272e-1;
constexpr double a75 = 6.02165389804559606850219397283e-2;
constexpr double a76 = -1.7578125e-2;
constexpr double a81 = 3.70920001185047927108779319836e-2;
constexpr double a84 = 1.70383925712239993810214054705e-1;
constexpr double a85 = 1.07262030446373284651809199168e-1;
constexpr double a86 = -1.53194377486244017527936158236e-2;
constexpr double a87 = 8.27378916381402288758473766002e-3;
constexpr double a91 = 6.24110958716075717114429577812e-1;
constexpr double a94 = -3.36089262944694129406857109825e0;
constexpr double a95 = -8.68219346841726006818189891453e-1;
constexpr double a96 = 2.75920996994467083049415600797e1;
constexpr double a97 = 2.01540675504778934086186788979e1;
constexpr double a98 = -4.34898841810699588477366255144e1;
constexpr double a101 = 4.77662536438264365890433908527e-1;
constexpr double a104 = -2.48811461997166764192642586468e0;
constexpr double a105 = -5.90290826836842996371446475743e-1;
constexpr double a106 = 2.12300514481811942347288949897e1;
constexpr double a107 = 1.52792336328824235832596922938e1;
constexpr double a108 = -3.32882109689848629194453265587e1;
constexpr double a109 = -2.03312017085086261358222928593e-2;
constexpr double a111 = -9.3714243008598732571704021658e-1;
constexpr double a114 = 5.18637242884406370830023853209e0;
constexpr double a115 = 1.09143734899672957818500254654e0;
constexpr double a116 = -8.14978701074692612513997267357e0;
constexpr double a117 = -1.85200656599969598641566180701e1;
constexpr double a118 = 2.27394870993505042818970056734e1;
constexpr double a119 = 2.49360555267965238987089396762e0;
constexpr double a1110 = -3.0467644718982195003823669022e0;
constexpr double a121 = 2.27331014751653820792359768449e0;
constexpr double a124 = -1.05344954667372501984066689879e1;
constexpr double a125 = -2.00087205822486249909675718444e0;
constexpr double a126 = -1.79589318631187989172765950534e1;
constexpr double a127 = 2.79488845294199600508499808837e1;
constexpr double a128 = -2.85899827713502369474065508674e0;
constexpr double a129 = -8.87285693353062954433549289258e0;
constexpr double a1210 = 1.23605671757943030647266201528e1;
constexpr double a1211 = 6.43392746015763530355970484046e-1;
constexpr double a141 = 5.61675022830479523392909219681e-2;
constexpr double a147 = 2.53500210216624811088794765333e-1;
constexpr double a148 = -2.46239037470802489917441475441e-1;
constexpr double a149 = -1.24191423263816360469010140626e-1;
constexpr double a1410 = 1.5329179827876569731206322685e-1;
constexpr double a1411 = 8.20105229563468988491666602057e-3;
constexpr double a1412 = 7.56789766054569976138603589584e-3;
constexpr double a1413 = -8.298e-3;
constexpr double a151 = 3.18346481635021405060768473261e-2;
constexpr double a156 = 2.83009096723667755288322961402e-2;
constexpr double a157 = 5.35419883074385676223797384372e-2;
constexpr double a158 = -5.49237485713909884646569340306e-2;
constexpr double a1511 = -1.08347328697249322858509316994e-4;
constexpr double a1512 = 3.82571090835658412954920192323e-4;
constexpr double a1513 = -3.40465008687404560802977114492e-4;
constexpr double a1514 = 1.41312443674632500278074618366e-1;
constexpr double a161 = -4.28896301583791923408573538692e-1;
constexpr double a166 = -4.69762141536116384314449447206e0;
constexpr double a167 = 7.68342119606259904184240953878e0;
constexpr double a168 = 4.06898981839711007970213554331e0;
constexpr double a169 = 3.56727187455281109270669543021e-1;
constexpr double a1613 = -1.39902416515901462129418009734e-3;
constexpr double a1614 = 2.9475147891527723389556272149e0;
constexpr double a1615 = -9.15095847217987001081870187138e0;

constexpr double b1 = 5.42937341165687622380535766363e-2;
constexpr double b6 = 4.45031289275240888144113950566e0;
constexpr double b7 = 1.89151789931450038304281599044e0;
constexpr double b8 = -5.8012039600105847814672114227e0;
constexpr double b9 = 3.1116436695781989440891606237e-1;
constexpr double b10 = -1.52160949662516078556178806805e-1;
constexpr double b11 = 2.01365400804030348374776537501e-1;
constexpr double b12 = 4.47106157277725905176885569043e-2;

constexpr double bhh1 = 0.244094488188976377952755905512e+00;
constexpr double bhh2 = 0.733846688281611857341361741547e+00;
constexpr double bhh3 = 0.220588235294117647058823529412e-01;

constexpr double er1 = 0.1312004499419488073250102996e-01;
constexpr double er6 = -0.1225156446376204440720569753e+01;
constexpr double er7 = -0.4957589496572501915214079952e+00;
constexpr double er8 = 0.1664377182454986536961530415e+01;
constexpr double er9 = -0.3503288487499736816886487290e+00;
constexpr double er10 = 0.3341791187130174790297318841e+00;
constexpr double er11 = 0.8192320648511571246570742613e-01;
constexpr double er12 = -0.2235530786388629525884427845e-01;

constexpr double d41 = -0.84289382761090128651353491142e+01;
constexpr double d46 = 0.56671495351937776962531783590e+00;
constexpr double d47 = -0.30689499459498916912797304727e+01;
constexpr double d48 = 0.23846676565120698287728149680e+01;
constexpr double d49 = 0.21170345824450282767155149946e+01;
constexpr double d410 = -0.87139158377797299206789907490e+00;
constexpr double d411 = 0.22404374302607882758541771650e+01;
constexpr double d412 = 0.63157877876946881815570249290e+00;
constexpr double d413 = -0.88990336451333310820698117400e-01;
constexpr double d414 = 0.18148505520854727256656404962e+02;
constexpr double d415 = -0.91946323924783554000451984436e+01;
constexpr double d416 = -0.44360363875948939664310572000e+01;
constexpr double d51 = 0.10427508642579134603413151009e+02;
constexpr double d56 = 0.24228349177525818288430175319e+03;
constexpr double d57 = 0.16520045171727028198505394887e+03;
constexpr double d58 = -0.37454675472269020279518312152e+03;
constexpr double d59 = -0.22113666853125306036270938578e+02;
constexpr double d510 = 0.77334326684722638389603898808e+01;
constexpr double d511 = -0.30674084731089398182061213626e+02;
constexpr double d512 = -0.93321305264302278729567221706e+01;
constexpr double d513 = 0.15697238121770843886131091075e+02;
constexpr double d514 = -0.31139403219565177677282850411e+02;
constexpr double d515 = -0.93529243588444783865713862664e+01;
constexpr double d516 = 0.35816841486394083752465898540e+02;
constexpr double d61 = 0.19985053242002433820987653617e+02;
constexpr double d66 = -0.38703730874935176555105901742e+03;
constexpr double d67 = -0.18917813819516756882830838328e+03;
constexpr double d68 = 0.52780815920542364900561016686e+03;
constexpr double d69 = -0.11573902539959630126141871134e+02;
constexpr double d610 = 0.68812326946963000169666922661e+01;
constexpr double d611 = -0.10006050966910838403183860980e+01;
constexpr double d612 = 0.77771377980534432092869265740e+00;
constexpr double d613 = -0.27782057523535084065932004339e+01;
constexpr double d614 = -0.60196695231264120758267380846e+02;
constexpr double d615 = 0.84320405506677161018159903784e+02;
constexpr double d616 = 0.11992291136182789328035130030e+02;
constexpr double d71 = -0.25693933462703749003312586129e+02;
constexpr double d76 = -0.15418974869023643374053993627e+03;
constexpr double d77 = -0.23152937917604549567536039109e+03;
constexpr double d78 = 0.35763911791061412378285349910e+03;
constexpr double d79 = 0.93405324183624310003907691704e+02;
constexpr double d710 = -0.37458323136451633156875139351e+02;
constexpr double d711 = 0.10409964950896230045147246184e+03;
constexpr double d712 = 0.29840293426660503123344363579e+02;
constexpr double d713 = -0.43533456590011143754432175058e+02;
constexpr double d714 = 0.96324553959188282948394950600e+02;
constexpr double d715 = -0.39177261675615439165231486172e+02;
constexpr double d716 = -0.14972683625798562581422125276e+03;
}  // namespace dp

// y' = -i H_I(t) y with H_I = e^{iDt} (H(t) - D) e^{-iDt}; D = 0 disables the picture change.
// The model Hamiltonians have only a few nonzeros per row, so the right-hand side is applied
// through compressed copies of the three harmonic parts.
class Rhs {
public:
    using Sparse = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

    Rhs(const HarmonicOperator& h, bool interaction) : diag_(Eigen::VectorXd::Zero(h.dim())), omega_(h.omega()) {
        if (interaction) diag_ = h.constant().diagonal().real();
        const ComplexMatrix shifted = h.constant() - ComplexMatrix(diag_.cast<Complex>().asDiagonal());
        constant_ = shifted.sparseView(Complex(0.0), 0.0);
        positive_ = h.positive().sparseView(Complex(0.0), 0.0);
        negative_ = ComplexMatrix(h.positive().adjoint()).sparseView(Complex(0.0), 0.0);
        phase_.resize(h.dim());
        work_.resize(h.dim());
        out_.resize(h.dim());
    }

    void operator()(double t, const StateVector& y, StateVector& dy) {
        set_phase(t);
        work_ = phase_.cwiseProduct(y);
        const Complex e = std::exp(-kI * (omega_ * t));
        out_.noalias() = constant_ * work_;
        out_.noalias() += e * (positive_ * work_);
        out_.noalias() += std::conj(e) * (negative_ * work_);
        dy = -kI * phase_.conjugate().cwiseProduct(out_);
    }

    void to_schroedinger(double t, const StateVector& y, StateVector& psi) {
        set_phase(t);
        psi = phase_.cwiseProduct(y);
    }

    void to_interaction(double t, const StateVector& psi, StateVector& y) {
        set_phase(t);
        y = phase_.conjugate().cwiseProduct(psi);
    }

private:
    // phase_k = exp(-i D_k t)
    void set_phase(double t) {
        for (Eigen::Index k = 0; k < diag_.size(); ++k) {
            const double a = diag_(k) * t;
            phase_(k) = Complex(std::cos(a), -std::sin(a));
        }
    }

    Eigen::VectorXd diag_;
    double omega_;
    Sparse constant_;
    Sparse positive_;
    Sparse negative_;
    StateVector phase_;
    StateVector work_;
    StateVector out_;
};

constexpr double kPerUnitStep = 10.0;
// Floor for the local error target. Below it the embedded error estimate is rounding noise,
// which scales with h just like the per-unit-step target, so shrinking h would never pass.
constexpr double kLocalTolFloor = 32.0 * std::numeric_limits<double>::epsilon();

double error_scale_sum(const StateVector& e, const StateVector& y0, const StateVector& y1, double tol) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < e.size(); ++i) {
        const double sk = tol + tol * std::max(std::abs(y0(i)), std::abs(y1(i)));
        sum += std::norm(e(i)) / (sk * sk);
    }
    return sum;
}

}  // namespace

std::vector<double> sample_grid(double t_start, double t_end, double omega, int samples_per_period) {
    if (!(t_end > t_start)) throw InvalidInput("sample_grid: t_end must exceed t_start");
    if (samples_per_period < 400) throw InvalidParameter("sample_grid: at least 400 samples per period are required");
    const double period = 2.0 * std::numbers::pi / omega;
    long intervals = static_cast<long>(std::ceil(samples_per_period * (t_end - t_start) / period - 1e-9));
    intervals = std::max(intervals, 2L);
    if (intervals % 2 != 0) ++intervals;
    std::vector<double> grid(static_cast<std::size_t>(intervals) + 1);
    for (long k = 0; k <= intervals; ++k)
        grid[static_cast<std::size_t>(k)] = t_start + (t_end - t_start) * static_cast<double>(k) / static_cast<double>(intervals);
    grid.back() = t_end;
    return grid;
}

Trajectory evolve(const HarmonicOperator& h, const StateVector& psi0, const std::vector<double>& grid,
                  double tolerance, bool interaction_picture, std::size_t max_steps) {
    using namespace dp;
    if (!(tolerance >= 1e-12 && tolerance <= 1e-4)) {
        std::ostringstream os;
        os << "evolve: tolerance " << tolerance << " outside [1e-12, 1e-4]";
        throw InvalidParameter(os.str());
    }
    if (psi0.size() != h.dim()) throw InvalidInput("evolve: state dimension does not match the Hamiltonian");
    require_normalized(psi0);
    if (grid.size() < 2) throw InvalidInput("evolve: output grid needs at least two times");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw InvalidInput("evolve: output grid must be strictly increasing");

    Rhs f(h, interaction_picture);
    const Eigen::Index n = h.dim();
    const double t0 = grid.front();
    const double t_end = grid.back();
    const double span = t_end - t0;

    Trajectory traj;
    traj.tolerance = tolerance;
    traj.times = grid;
    traj.states.reserve(grid.size());
    traj.states.push_back(psi0);

    StateVector y;
    f.to_interaction(t0, psi0, y);
    StateVector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), k8(n), k9(n), k10(n), k11(n), k12(n),
        k13(n), k14(n), k15(n), k16(n), ynew(n), stage(n), incr(n), e3(n), e5(n);
    StateVector r1(n), r2(n), r3(n), r4(n), r5(n), r6(n), r7(n), r8(n), out(n);

    double t = t0;
    f(t, y, k1);
    // Initial step: resolve the fastest rate of the right-hand side.
    const double rate = std::max(k1.norm() / std::max(y.norm(), 1e-300), 1e-12);
    double step = std::min(0.01 / rate, t_end - t0);
    std::size_t next = 1;
    bool last_rejected = false;
    constexpr double safe = 0.9, alpha = 1.0 / 8.0, min_scale = 0.333, max_scale = 6.0;

    while (next < grid.size()) {
        if (traj.accepted_steps + traj.rejected_steps >= max_steps) {
            std::ostringstream os;
            os << "evolve: step budget exhausted at t = " << t;
            throw StiffnessError(os.str(), t);
        }
        const double nominal = step;
        if (t + step > t_end) step = t_end - t;
        if (step < 1e-14 * std::max(1.0, std::abs(t))) {
            std::ostringstream os;
            os << "evolve: step size underflow at t = " << t;
            throw StiffnessError(os.str(), t);
        }
        const double hs = step;

        stage = y + hs * a21 * k1;
        f(t + c2 * hs, stage, k2);
        stage = y + hs * (a31 * k1 + a32 * k2);
        f(t + c3 * hs, stage, k3);
        stage = y + hs * (a41 * k1 + a43 * k3);
        f(t + c4 * hs, stage, k4);
        stage = y + hs * (a51 * k1 + a53 * k3 + a54 * k4);
        f(t + c5 * hs, stage, k5);
        stage = y + hs * (a61 * k1 + a64 * k4 + a65 * k5);
        f(t + c6 * hs, stage, k6);
        stage = y + hs * (a71 * k1 + a74 * k4 + a75 * k5 + a76 * k6);
        f(t + c7 * hs, stage, k7);
        stage = y + hs * (a81 * k1 + a84 * k4 + a85 * k5 + a86 * k6 + a87 * k7);
        f(t + c8 * hs, stage, k8);
        stage = y + hs * (a91 * k1 + a94 * k4 + a95 * k5 + a96 * k6 + a97 * k7 + a98 * k8);
        f(t + c9 * hs, stage, k9);
        stage = y + hs * (a101 * k1 + a104 * k4 + a105 * k5 + a106 * k6 + a107 * k7 + a108 * k8 + a109 * k9);
        f(t + c10 * hs, stage, k10);
        stage = y + hs * (a111 * k1 + a114 * k4 + a115 * k5 + a116 * k6 + a117 * k7 + a118 * k8 + a119 * k9 +
                          a1110 * k10);
        f(t + c11 * hs, stage, k11);
        stage = y + hs * (a121 * k1 + a124 * k4 + a125 * k5 + a126 * k6 + a127 * k7 + a128 * k8 + a129 * k9 +
                          a1210 * k10 + a1211 * k11);
        f(t + hs, stage, k12);

        incr = b1 * k1 + b6 * k6 + b7 * k7 + b8 * k8 + b9 * k9 + b10 * k10 + b11 * k11 + b12 * k12;
        ynew = y + hs * incr;

        e3 = incr - bhh1 * k1 - bhh2 * k9 - bhh3 * k12;
        e5 = er1 * k1 + er6 * k6 + er7 * k7 + er8 * k8 + er9 * k9 + er10 * k10 + er11 * k11 + er12 * k12;
        // Error per unit step: the local target shrinks with h / span so that the
        // accumulated (global) error, and hence the norm drift, stays of order `tolerance`.
        const double local_tol =
            std::max(tolerance * std::min(1.0, kPerUnitStep * std::max(hs, nominal) / span), kLocalTolFloor);
        const double err3 = error_scale_sum(e3, y, ynew, local_tol);
        const double err5 = error_scale_sum(e5, y, ynew, local_tol);
        double deno = err5 + 0.01 * err3;
        if (deno <= 0.0) deno = 1.0;
        const double err = std::abs(hs) * err5 * std::sqrt(1.0 / (deno * 2.0 * static_cast<double>(n)));

        if (!(err <= 1.0)) {
            ++traj.rejected_steps;
            step = hs * std::max(min_scale, safe * std::pow(std::max(err, 1e-300), -alpha));
            last_rejected = true;
            continue;
        }

        ++traj.accepted_steps;
        const double t_new = t + hs;
        f(t_new, ynew, k13);

        if (next < grid.size() && grid[next] <= t_new + 1e-12 * std::max(1.0, std::abs(t_new))) {
            r1 = y;
            r2 = ynew - y;
            r3 = hs * k1 - r2;
            r4 = r2 - hs * k13 - r3;
            r5 = d41 * k1 + d46 * k6 + d47 * k7 + d48 * k8 + d49 * k9 + d410 * k10 + d411 * k11 + d412 * k12;
            r6 = d51 * k1 + d56 * k6 + d57 * k7 + d58 * k8 + d59 * k9 + d510 * k10 + d511 * k11 + d512 * k12;
            r7 = d61 * k1 + d66 * k6 + d67 * k7 + d68 * k8 + d69 * k9 + d610 * k10 + d611 * k11 + d612 * k12;
            r8 = d71 * k1 + d76 * k6 + d77 * k7 + d78 * k8 + d79 * k9 + d710 * k10 + d711 * k11 + d712 * k12;
            stage = y + hs * (a141 * k1 + a147 * k7 + a148 * k8 + a149 * k9 + a1410 * k10 + a1411 * k11 +
                              a1412 * k12 + a1413 * k13);
            f(t + c14 * hs, stage, k14);
            stage = y + hs * (a151 * k1 + a156 * k6 + a157 * k7 + a158 * k8 + a1511 * k11 + a1512 * k12 +
                              a1513 * k13 + a1514 * k14);
            f(t + c15 * hs, stage, k15);
            stage = y + hs * (a161 * k1 + a166 * k6 + a167 * k7 + a168 * k8 + a169 * k9 + a1613 * k13 +
                              a1614 * k14 + a1615 * k15);
            f(t + c16 * hs, stage, k16);
            r5 = hs * (r5 + d413 * k13 + d414 * k14 + d415 * k15 + d416 * k16);
            r6 = hs * (r6 + d513 * k13 + d514 * k14 + d515 * k15 + d516 * k16);
            r7 = hs * (r7 + d613 * k13 + d614 * k14 + d615 * k15 + d616 * k16);
            r8 = hs * (r8 + d713 * k13 + d714 * k14 + d715 * k15 + d716 * k16);

            while (next < grid.size() && grid[next] <= t_new + 1e-12 * std::max(1.0, std::abs(t_new))) {
                const double tk = grid[next];
                StateVector yk;
                if (next + 1 == grid.size() && std::abs(tk - t_new) <= 1e-12 * std::max(1.0, std::abs(t_new))) {
                    yk = ynew;
                } else {
                    const double s = (tk - t) / hs;
                    const double s1 = 1.0 - s;
                    yk = r1 + s * (r2 + s1 * (r3 + s * (r4 + s1 * (r5 + s * (r6 + s1 * (r7 + s * r8))))));
                }
                f.to_schroedinger(tk, yk, out);
                traj.states.push_back(out);
                ++next;
            }
        }

        double scale = err == 0.0 ? max_scale : safe * std::pow(err, -alpha);
        scale = std::clamp(scale, min_scale, max_scale);
        if (last_rejected) scale = std::min(scale, 1.0);
        last_rejected = false;

        t = t_new;
        y.swap(ynew);
        k1.swap(k13);
        step = hs * scale;
    }

    double drift = 0.0;
    for (const auto& s : traj.states) drift = std::max(drift, std::abs(s.norm() - 1.0));
    traj.norm_drift = drift;
    return traj;
}

Trajectory evolve(const HamiltonianSet& set, const StateVector& psi0, double t_end, double tolerance,
                  const EvolveOptions& options) {
    const auto grid = sample_grid(options.t_start, t_end, set.omega, options.samples_per_period);
    return evolve(set.generator(options.dynamics), psi0, grid, tolerance, options.interaction_picture,
                  options.max_steps);
}

std::vector<std::pair<double, double>> instantaneous_fidelity(const Trajectory& traj, const EigenBranch& branch) {
    std::vector<std::pair<double, double>> out;
    out.reserve(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const StateVector ket = branch.ket_at(traj.times[i]);
        if (ket.size() != traj.states[i].size())
            throw InvalidInput("instantaneous_fidelity: dimension mismatch");
        out.emplace_back(traj.times[i], std::norm(ket.dot(traj.states[i])));
    }
    return out;
}

}  // namespace geophase
