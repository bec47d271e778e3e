#include "geophase/spectra.hpp"

#include "geophase/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace geophase {

namespace {

Eigen::Index hybrid_basis_index(const HybridModel& model, HalfInteger m, bool up) {
    const int k = (model.j.twice() - m.twice()) / 2;
    return 2 * k + (up ? 0 : 1);
}

Eigen::Index oscillator_basis_index(int n, bool up) { return 2 * n + (up ? 0 : 1); }

}  // namespace

double hybrid_mixing_angle(const HybridModel& model, HalfInteger m) {
    const double j = model.j.value();
    const double mm = m.value();
    const double s2 = j * (j + 1.0) - mm * (mm + 1.0);
    const double off = model.mu * std::sqrt(std::max(0.0, s2));
    const double diag = model.B + model.mu * (mm + 0.5);
    return std::atan2(off, diag);
}

double oscillator_mixing_angle(const OscillatorModel& model, int n) {
    return std::atan2(model.g * std::sqrt(static_cast<double>(n + 1)), model.nu);
}

EigenBranch hybrid_eigensystem(const HybridModel& model, HalfInteger m, Branch branch) {
    model.validate();
    const HalfInteger j = model.j;
    if (m > j || m < -(j + 1) || (m.twice() - j.twice()) % 2 != 0) {
        std::ostringstream os;
        os << "hybrid index m = " << m.str() << " outside {-(j+1), ..., j} for j = " << j.str();
        throw IndexError(os.str());
    }
    const bool top = m == j;
    const bool bottom = m == -(j + 1);
    if ((top && branch == Branch::minus) || (bottom && branch == Branch::plus)) {
        std::ostringstream os;
        os << "hybrid index m = " << m.str() << " has only the " << (top ? "+" : "-") << " branch";
        throw EdgeBranchError(os.str());
    }

    const auto set = build_hybrid(model);
    EigenBranch out;
    out.model_kind = set.kind;
    out.index = m;
    out.branch = branch;
    out.frame = set.frame;
    out.static_ket = StateVector::Zero(set.dim);

    const double jj = j.value();
    const double mm = m.value();
    if (top) {
        out.edge = true;
        out.alpha = 0.0;
        out.energy = -model.mu * jj - model.B;
        out.static_ket(hybrid_basis_index(model, m, true)) = 1.0;
        return out;
    }
    if (bottom) {
        // the overall minus sign of this product state is gauge and is dropped
        out.edge = true;
        out.alpha = 0.0;
        out.energy = -model.mu * jj + model.B;
        out.static_ket(hybrid_basis_index(model, m + 1, false)) = 1.0;
        return out;
    }

    const double alpha = hybrid_mixing_angle(model, m);
    const double s = std::sqrt(jj * (jj + 1.0) - mm * (mm + 1.0));
    const double d = model.B + model.mu * (mm + 0.5);
    const double r = std::hypot(d, model.mu * s);
    const double c = std::cos(0.5 * alpha);
    const double sn = std::sin(0.5 * alpha);
    const auto up = hybrid_basis_index(model, m, true);
    const auto down = hybrid_basis_index(model, m + 1, false);
    out.alpha = alpha;
    if (branch == Branch::plus) {
        out.energy = 0.5 * model.mu - r;
        out.static_ket(up) = c;
        out.static_ket(down) = sn;
    } else {
        out.energy = 0.5 * model.mu + r;
        out.static_ket(up) = sn;
        out.static_ket(down) = -c;
    }
    return out;
}

EigenBranch oscillator_eigensystem(const OscillatorModel& model, int n, Branch branch) {
    model.validate();
    if (n < -1 || n > model.n_max - 1) {
        std::ostringstream os;
        os << "oscillator index n = " << n << " outside {-1, ..., " << model.n_max - 1 << "}";
        throw IndexError(os.str());
    }
    if (model.n_max < OscillatorModel::required_n_max(n, model.beta_mag)) {
        std::ostringstream os;
        os << "oscillator index n = " << n << " needs n_max >= "
           << OscillatorModel::required_n_max(n, model.beta_mag);
        throw InvalidParameter(os.str());
    }
    if (n == -1 && branch == Branch::plus)
        throw EdgeBranchError("oscillator index n = -1 has only the - branch");

    const auto set = build_oscillator(model);
    EigenBranch out;
    out.model_kind = ModelKind::oscillator;
    out.index = HalfInteger::from_twice(2 * n);
    out.branch = branch;
    out.frame = set.frame;
    out.static_ket = StateVector::Zero(set.dim);

    if (n == -1) {
        out.edge = true;
        out.alpha = 0.0;
        out.energy = 0.0;
        out.static_ket(oscillator_basis_index(0, false)) = 1.0;
        return out;
    }

    const double alpha = oscillator_mixing_angle(model, n);
    const double kappa = 0.5 * model.g * std::sqrt(static_cast<double>(n + 1));
    const double r = std::hypot(0.5 * model.nu, kappa);
    const double center = model.nu * (n + 0.5);
    const double c = std::cos(0.5 * alpha);
    const double sn = std::sin(0.5 * alpha);
    const auto up = oscillator_basis_index(n, true);
    const auto down = oscillator_basis_index(n + 1, false);
    out.alpha = alpha;
    if (branch == Branch::plus) {
        out.energy = center - r;
        out.static_ket(up) = c;
        out.static_ket(down) = -sn;
    } else {
        out.energy = center + r;
        out.static_ket(up) = sn;
        out.static_ket(down) = c;
    }
    return out;
}

std::vector<std::pair<HalfInteger, Branch>> hybrid_branches(const HybridModel& model) {
    std::vector<std::pair<HalfInteger, Branch>> out;
    const HalfInteger j = model.j;
    for (HalfInteger m = j; m >= -(j + 1); m = m - 1) {
        if (m != -(j + 1)) out.emplace_back(m, Branch::plus);
        if (m != j) out.emplace_back(m, Branch::minus);
    }
    return out;
}

std::vector<std::pair<int, Branch>> oscillator_branches(const OscillatorModel& model, int n_highest) {
    std::vector<std::pair<int, Branch>> out;
    out.emplace_back(-1, Branch::minus);
    const int top = std::min(n_highest, model.n_max - 1);
    for (int n = 0; n <= top; ++n) {
        out.emplace_back(n, Branch::plus);
        out.emplace_back(n, Branch::minus);
    }
    return out;
}

std::vector<NumericEigenpair> numeric_eigensystem(const ComplexMatrix& h, const ComplexMatrix& label) {
    if (h.rows() != h.cols() || label.rows() != h.rows() || label.cols() != h.cols())
        throw InvalidInput("numeric_eigensystem: H and label must be square and of equal size");
    const double scale = std::max(1.0, max_abs(h));
    if (hermiticity_defect(h) > 1e-9 * scale)
        throw InvalidInput("numeric_eigensystem: H is not hermitian");
    const double lscale = std::max(1.0, max_abs(label));
    const double comm = max_abs(commutator(h, label));
    if (comm > 1e-9 * scale * lscale) {
        std::ostringstream os;
        os << "numeric_eigensystem: label does not commute with H (|[H,L]| = " << comm << ")";
        throw LabelingError(os.str());
    }

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> lsolver(label);
    const Eigen::VectorXd& lv = lsolver.eigenvalues();
    const ComplexMatrix& lvec = lsolver.eigenvectors();

    std::vector<NumericEigenpair> out;
    out.reserve(static_cast<std::size_t>(h.rows()));
    Eigen::Index start = 0;
    while (start < lv.size()) {
        Eigen::Index stop = start + 1;
        while (stop < lv.size() && std::abs(lv(stop) - lv(start)) < 1e-6) ++stop;
        const Eigen::Index width = stop - start;
        const ComplexMatrix q = lvec.middleCols(start, width);
        const ComplexMatrix block = q.adjoint() * h * q;
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> bsolver(0.5 * (block + block.adjoint()));
        for (Eigen::Index k = 0; k < width; ++k) {
            StateVector v = q * bsolver.eigenvectors().col(k);
            v.normalize();
            for (Eigen::Index i = 0; i < v.size(); ++i) {
                if (std::abs(v(i)) > 1e-8) {
                    v *= std::conj(v(i)) / std::abs(v(i));
                    break;
                }
            }
            out.push_back(NumericEigenpair{bsolver.eigenvalues()(k), std::move(v),
                                           lv.segment(start, width).mean(), width});
        }
        start = stop;
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (std::abs(a.label - b.label) > 1e-6) return a.label < b.label;
        return a.energy < b.energy;
    });
    return out;
}

StateVector rotating_frame_eigenstate(const HamiltonianSet& set, const EigenBranch& branch) {
    const StateVector target = branch.ket_at(0.0);
    if (target.size() != set.dim) throw InvalidInput("rotating_frame_eigenstate: dimension mismatch");
    const ComplexMatrix h = set.h0_at(0.0) - set.h_neglected;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (h + h.adjoint()));
    Eigen::Index best = 0;
    double best_overlap = -1.0;
    for (Eigen::Index c = 0; c < solver.eigenvectors().cols(); ++c) {
        const double o = std::abs(solver.eigenvectors().col(c).dot(target));
        if (o > best_overlap) {
            best_overlap = o;
            best = c;
        }
    }
    StateVector out = solver.eigenvectors().col(best);
    const Complex phase = out.dot(target);
    if (std::abs(phase) > 0.0) out *= phase / std::abs(phase);
    return out;
}

double overlap_magnitude(const StateVector& a, const StateVector& b) { return std::abs(a.dot(b)); }

}  // namespace geophase
