#include "geophase/cli/commands.hpp"

#include "geophase/errors.hpp"
#include "geophase/nonsep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <thread>

namespace geophase::cli {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct OutputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

HalfInteger classical_index(Branch b) { return HalfInteger::from_twice(b == Branch::plus ? 0 : -2); }

ReportOptions report_options(const RunConfig& cfg) {
    ReportOptions o;
    o.tolerance = cfg.tolerance;
    o.samples_per_period = cfg.samples_per_period;
    return o;
}

CheckRow match(std::string quantity, double closed, double numeric, double tol) {
    CheckRow r;
    r.quantity = std::move(quantity);
    r.closed = closed;
    r.numeric = numeric;
    r.tolerance = tol;
    return r;
}

CheckRow phase_match(std::string quantity, double closed, double numeric, double tol) {
    auto r = match(std::move(quantity), closed, numeric, tol);
    r.phase = true;
    return r;
}

CheckRow relative_match(std::string quantity, double closed, double numeric, double tol) {
    auto r = match(std::move(quantity), closed, numeric, tol);
    r.relative = true;
    return r;
}

CheckRow one_sided(std::string quantity, double closed, double numeric, double tol, CheckRow::Kind kind) {
    auto r = match(std::move(quantity), closed, numeric, tol);
    r.kind = kind;
    return r;
}

// Bare route (neglected term off) from the rotating-frame eigenstate; returns the
// extracted geometric phase.
double adiabatic_gamma(const HybridModel& model, HalfInteger m, Branch branch, const RunConfig& cfg) {
    const auto set = build_hybrid(model);
    const auto eb = hybrid_eigensystem(model, m, branch);
    EvolveOptions o;
    o.dynamics = Dynamics::bare;
    o.samples_per_period = cfg.samples_per_period;
    const auto traj = evolve(set, rotating_frame_eigenstate(set, eb), set.period(), cfg.tolerance, o);
    return cyclic_phase_decomposition(traj, set.system_hamiltonian(Dynamics::bare)).gamma;
}

void nonsep_rows(std::vector<CheckRow>& rows, const NonsepReport& r) {
    rows.push_back(match("concurrence", r.concurrence_closed, r.concurrence, 1e-9));
    if (std::isnan(r.gamma_mixed) || std::isnan(r.gamma_mixed_closed)) {
        auto row = phase_match("gamma_mixed (kinematic)", r.gamma_mixed_closed, r.gamma_mixed, 5e-3);
        row.skipped = true;
        rows.push_back(row);
    } else {
        rows.push_back(phase_match("gamma_mixed (kinematic)", r.gamma_mixed_closed, r.gamma_mixed, 5e-3));
    }
    rows.push_back(one_sided("bound C <= S/2pi", r.action / (2.0 * kPi), r.concurrence, 1e-9, CheckRow::Kind::at_most));
    rows.push_back(one_sided("min eigenstate fidelity", 1.0, r.min_fidelity, 1e-7, CheckRow::Kind::at_least));
}

std::vector<CheckRow> verify_classical(const RunConfig& cfg) {
    const auto model = cfg.classical_model();
    const auto m = classical_index(cfg.branch);
    const auto rep = complementarity_report(model, m, cfg.branch, report_options(cfg));
    const double closed = classical_berry_closed(model.theta, cfg.branch).wrapped;

    std::vector<CheckRow> rows;
    rows.push_back(phase_match("gamma (frame-exact)", closed, rep.gamma_berry, 5e-3));

    const double g1 = adiabatic_gamma(model, m, cfg.branch, cfg);
    auto half = model;
    half.omega *= 0.5;
    const double g2 = adiabatic_gamma(half, m, cfg.branch, cfg);
    rows.push_back(phase_match("gamma (adiabatic)", closed, g1, 5e-3));
    const double r1 = wrap_phase(g1 - closed);
    const double r2 = wrap_phase(g2 - closed);
    rows.push_back(match("adiabatic residual ratio omega/2 : omega", 0.5, r2 / r1, 0.02));

    rows.push_back(relative_match("action", classical_action_closed(model.theta), rep.action, 1e-5));
    auto other = model;
    other.omega = model.B * (std::abs(model.omega / model.B - 1e-2) < 1e-12 ? 1e-3 : 1e-2);
    const auto rep_other = complementarity_report(other, m, cfg.branch, report_options(cfg));
    rows.push_back(relative_match("action omega-independence", rep.action, rep_other.action, 1e-6));
    rows.push_back(one_sided("min eigenstate fidelity", 1.0, rep.min_fidelity, 1e-7, CheckRow::Kind::at_least));
    return rows;
}

std::vector<CheckRow> verify_hybrid(const RunConfig& cfg) {
    const auto model = cfg.hybrid_model();
    const auto m = HalfInteger::from_double(cfg.m);
    const auto rep = complementarity_report(model, m, cfg.branch, report_options(cfg));

    std::vector<CheckRow> rows;
    rows.push_back(phase_match("gamma", rep.gamma_berry_closed, rep.gamma_berry, 5e-3));
    rows.push_back(match("action", rep.action_closed, rep.action, 1e-4));
    nonsep_rows(rows, rep);
    return rows;
}

std::vector<CheckRow> verify_oscillator(const RunConfig& cfg) {
    const auto model = cfg.oscillator_model();
    auto doubled = model;
    doubled.n_max = 2 * model.n_max;
    const auto rep = complementarity_report(model, cfg.n, cfg.branch, report_options(cfg));
    const auto rep2 = complementarity_report(doubled, cfg.n, cfg.branch, report_options(cfg));

    std::vector<CheckRow> rows;
    rows.push_back(phase_match("gamma", rep.gamma_berry_closed, rep.gamma_berry, 1e-2));
    rows.push_back(match("action (variance form)", rep.action_closed, rep.action, 1e-3));
    rows.push_back(match("action (2pi sqrt(4(2n+1)|b|^2 + sin^2 a))", rep.action_simple, rep.action, 1e-3));
    rows.push_back(match("action n_max vs 2 n_max", rep.action, rep2.action, 1e-6));
    nonsep_rows(rows, rep);
    return rows;
}

double tradeoff_theta(double theta_m, double alpha) {
    const double c = std::cos(theta_m) / std::cos(alpha);
    if (!(std::abs(c) <= 1.0 + 1e-12))
        throw InvalidParameter("tradeoff: cos(theta) cos(alpha) = cos(--theta) has no solution at this point");
    return std::acos(std::clamp(c, -1.0, 1.0));
}

void apply_axis(RunConfig& cfg, const std::string& name, double value) {
    if (name == "theta") cfg.theta = value;
    else if (name == "mu") cfg.mu = value;
    else if (name == "B") cfg.B = value;
    else if (name == "omega") cfg.omega = value;
    else if (name == "omega-ratio") cfg.omega_ratio = value;
    else if (name == "nu") cfg.nu = value;
    else if (name == "g") cfg.g = value;
    else if (name == "beta") cfg.beta = value;
    else throw InvalidParameter("unknown sweep parameter '" + name + "'");
}

std::vector<RunConfig> sweep_points(const RunConfig& cfg) {
    std::vector<RunConfig> points;
    if (cfg.sweep.parameter.empty()) {
        points.push_back(cfg);
        return points;
    }
    for (double v : cfg.sweep.values()) {
        auto p = cfg;
        apply_axis(p, cfg.sweep.parameter, v);
        if (p.scenario != Scenario::tradeoff) p.validate();
        points.push_back(std::move(p));
    }
    return points;
}

std::vector<std::string> columns_for(Scenario s) {
    switch (s) {
        case Scenario::oscillator:
            return {"scenario", "nu", "g", "beta", "omega", "n", "branch", "alpha", "concurrence", "action_numeric",
                    "action_closed", "gamma_berry", "gamma_mixed", "bound_ratio"};
        case Scenario::uncertainty:
            return {"scenario", "theta", "B", "omega", "delta_t", "integral", "integral_closed", "satisfied"};
        default:
            return {"scenario", "theta", "mu", "B", "omega", "j", "m", "branch", "alpha", "concurrence",
                    "action_numeric", "action_closed", "gamma_berry", "gamma_mixed", "bound_ratio"};
    }
}

// Uniform-accumulation estimate pi sin(theta) / (1 - cos(theta)); pi at theta = pi/2.
double probe_integral_closed(double theta) { return kPi * std::sin(theta) / (1.0 - std::cos(theta)); }

std::vector<Cell> sweep_row(const RunConfig& p) {
    const std::string scen = to_string(p.scenario);
    const std::string br = to_string(p.branch);
    std::vector<Cell> row;
    switch (p.scenario) {
        case Scenario::oscillator: {
            const auto model = p.oscillator_model();
            const auto r = complementarity_report(model, p.n, p.branch, report_options(p));
            row = {scen, p.nu, p.g, p.beta, model.omega, static_cast<double>(p.n), br, r.alpha, r.concurrence,
                   r.action, r.action_closed, r.gamma_berry, r.gamma_mixed, r.bound_ratio};
            break;
        }
        case Scenario::uncertainty: {
            const auto model = p.classical_model();
            ProbeOptions o;
            o.tolerance = p.tolerance;
            o.samples_per_period = p.samples_per_period;
            o.max_periods = p.max_periods;
            const auto r = uncertainty_relation_probe(model, o);
            row = {scen, model.theta, model.B, model.omega, r.delta_t ? *r.delta_t : kNaN, r.integral,
                   probe_integral_closed(model.theta), std::string(r.satisfied ? "true" : "false")};
            break;
        }
        case Scenario::classical: {
            const auto model = p.classical_model();
            const auto m = classical_index(p.branch);
            const auto r = complementarity_report(model, m, p.branch, report_options(p));
            row = {scen, model.theta, 0.0, model.B, model.omega, 0.0, m.value(), br, r.alpha, r.concurrence,
                   r.action, r.action_closed, r.gamma_berry, r.gamma_mixed, r.bound_ratio};
            break;
        }
        case Scenario::hybrid:
        case Scenario::tradeoff: {
            auto model = p.hybrid_model();
            const auto m = HalfInteger::from_double(p.m);
            if (p.scenario == Scenario::tradeoff) {
                model.theta = tradeoff_theta(p.theta, hybrid_mixing_angle(model, m));
                model.validate();
            }
            const auto r = complementarity_report(model, m, p.branch, report_options(p));
            row = {scen, model.theta, model.mu, model.B, model.omega, model.j.value(), m.value(), br, r.alpha,
                   r.concurrence, r.action, r.action_closed, r.gamma_berry, r.gamma_mixed, r.bound_ratio};
            break;
        }
    }
    return row;
}

// Evaluates every point on a worker pool; rows come back in grid order.
std::vector<std::vector<Cell>> run_points(const std::vector<RunConfig>& points, int threads) {
    const std::size_t n = points.size();
    std::vector<std::vector<Cell>> rows(n);
    std::vector<std::exception_ptr> errors(n);
    std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                      : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                rows[i] = sweep_row(points[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return rows;
}

std::vector<CheckRow> verify_tradeoff(const RunConfig& cfg) {
    const auto t = sweep_table(cfg);
    auto col = [&](const std::string& name) {
        const auto it = std::find(t.columns.begin(), t.columns.end(), name);
        const auto k = static_cast<std::size_t>(it - t.columns.begin());
        std::vector<double> v;
        for (const auto& row : t.rows) v.push_back(std::get<double>(row[k]));
        return v;
    };
    const auto action = col("action_numeric");
    const auto conc = col("concurrence");
    const auto mixed = col("gamma_mixed");
    const auto theta = col("theta");

    double spread = 0.0;
    for (double s : action) spread = std::max(spread, std::abs(s - action.front()) / action.front());
    int not_decreasing = 0;
    for (std::size_t i = 1; i < conc.size(); ++i)
        if (!(conc[i] < conc[i - 1])) ++not_decreasing;

    // gamma_- evaluated at the effective angle, which the sweep holds fixed
    const double gamma_minus = classical_berry_closed(cfg.theta, Branch::minus).wrapped;
    int not_approaching = 0;
    for (std::size_t i = 1; i < mixed.size(); ++i)
        if (std::abs(wrap_phase(mixed[i] - gamma_minus)) > std::abs(wrap_phase(mixed[i - 1] - gamma_minus)) + 1e-9)
            ++not_approaching;

    std::vector<CheckRow> rows;
    rows.push_back(match("action relative spread", 0.0, spread, 1e-6));
    rows.push_back(relative_match("action vs 2pi sin(theta_m)", classical_action_closed(cfg.theta), action.back(), 1e-5));
    rows.push_back(one_sided("concurrence non-decreasing steps", 0.0, not_decreasing, 0.0, CheckRow::Kind::at_most));
    rows.push_back(one_sided("final concurrence", 0.0, conc.back(), 1e-3, CheckRow::Kind::at_most));
    rows.push_back(one_sided("gamma_mixed steps away from gamma_-", 0.0, not_approaching, 0.0, CheckRow::Kind::at_most));
    rows.push_back(phase_match("final gamma_mixed vs gamma_-", gamma_minus, mixed.back(), 5e-3));
    rows.push_back(match("final theta vs theta_m", cfg.theta, theta.back(), 1e-9));
    return rows;
}

std::vector<CheckRow> verify_uncertainty(const RunConfig& cfg) {
    const auto model = cfg.classical_model();
    ProbeOptions o;
    o.tolerance = cfg.tolerance;
    o.samples_per_period = cfg.samples_per_period;
    o.max_periods = cfg.max_periods;
    const auto r = uncertainty_relation_probe(model, o);
    const bool perpendicular = std::abs(model.theta - 0.5 * kPi) < 1e-6;

    std::vector<CheckRow> rows;
    rows.push_back(relative_match(perpendicular ? "int dE dt (equality)" : "int dE dt (uniform estimate)",
                                  probe_integral_closed(model.theta), r.integral, perpendicular ? 1e-2 : 5e-2));
    rows.push_back(one_sided("bound int dE dt >= pi", kPi, r.integral, 1e-2 * kPi, CheckRow::Kind::at_least));
    auto jump = one_sided("noncyclic phase max step", 0.0, r.max_jump, 0.5, CheckRow::Kind::at_most);
    rows.push_back(jump);
    return rows;
}

std::optional<std::filesystem::path> output_target(const RunConfig& cfg) {
    if (cfg.output) return std::filesystem::path(*cfg.output);
    if (const char* dir = std::getenv("GEOPHASE_OUTPUT_DIR"); dir && *dir) {
        const std::string ext = cfg.format == Format::json ? "json" : "csv";
        return std::filesystem::path(dir) /
               (std::string(to_string(cfg.command)) + "-" + to_string(cfg.scenario) + "." + ext);
    }
    return std::nullopt;
}

void emit(const Table& table, const RunConfig& cfg, std::ostream& out) {
    const std::string text = cfg.format == Format::json ? to_json(table) : to_csv(table);
    if (const auto target = output_target(cfg)) {
        try {
            write_atomically(*target, text);
        } catch (const std::exception& e) {
            throw OutputError(e.what());
        }
    } else {
        out << text;
    }
}

}  // namespace

std::vector<CheckRow> verify_checks(const RunConfig& cfg) {
    switch (cfg.scenario) {
        case Scenario::classical: return verify_classical(cfg);
        case Scenario::hybrid: return verify_hybrid(cfg);
        case Scenario::oscillator: return verify_oscillator(cfg);
        case Scenario::tradeoff: return verify_tradeoff(cfg);
        case Scenario::uncertainty: return verify_uncertainty(cfg);
    }
    return {};
}

Table sweep_table(const RunConfig& cfg) {
    Table t;
    t.columns = columns_for(cfg.scenario);
    for (auto& row : run_points(sweep_points(cfg), cfg.threads)) t.add_row(std::move(row));
    return t;
}

Table evolve_table(const RunConfig& cfg) {
    HamiltonianSet set;
    EigenBranch eb;
    switch (cfg.scenario) {
        case Scenario::classical: {
            const auto model = cfg.classical_model();
            set = build_hybrid(model);
            eb = hybrid_eigensystem(model, classical_index(cfg.branch), cfg.branch);
            break;
        }
        case Scenario::hybrid: {
            const auto model = cfg.hybrid_model();
            set = build_hybrid(model);
            eb = hybrid_eigensystem(model, HalfInteger::from_double(cfg.m), cfg.branch);
            break;
        }
        case Scenario::oscillator: {
            const auto model = cfg.oscillator_model();
            set = build_oscillator(model);
            eb = oscillator_eigensystem(model, cfg.n, cfg.branch);
            break;
        }
        default:
            throw InvalidParameter("evolve supports the classical, hybrid and oscillator scenarios");
    }

    EvolveOptions o;
    o.samples_per_period = cfg.samples_per_period;
    const auto traj = evolve(set, eb.ket_at(0.0), cfg.periods * set.period(), cfg.tolerance, o);
    const auto h_sys = set.system_hamiltonian();
    const auto fidelity = instantaneous_fidelity(traj, eb);
    const auto de = energy_uncertainty_curve(traj, h_sys);
    const auto nc = noncyclic_phase_curve(traj, h_sys);

    Table t;
    t.columns.push_back("t");
    if (cfg.amplitudes) {
        for (Eigen::Index k = 0; k < set.dim; ++k) {
            t.columns.push_back("re_" + std::to_string(k));
            t.columns.push_back("im_" + std::to_string(k));
        }
    }
    for (const char* c : {"norm", "fidelity", "delta_e", "dynamic_phase", "noncyclic_phase"}) t.columns.push_back(c);

    for (std::size_t i = 0; i < traj.size(); ++i) {
        std::vector<Cell> row;
        row.push_back(traj.times[i]);
        if (cfg.amplitudes) {
            for (Eigen::Index k = 0; k < set.dim; ++k) {
                row.push_back(traj.states[i](k).real());
                row.push_back(traj.states[i](k).imag());
            }
        }
        row.push_back(traj.states[i].norm());
        row.push_back(fidelity[i].second);
        row.push_back(de[i].second);
        row.push_back(nc.dynamic_phase[i]);
        row.push_back(nc.gamma[i]);
        t.add_row(std::move(row));
    }
    return t;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = parse_arguments(argc, argv);
    } catch (const HelpRequested& h) {
        out << h.text;
        return 0;
    } catch (const std::exception& e) {
        err << "geophase: " << e.what() << '\n';
        return 2;
    }

    try {
        switch (cfg.command) {
            case Command::verify: {
                const auto rows = verify_checks(cfg);
                out << render_checks(rows);
                const auto failed = std::count_if(rows.begin(), rows.end(), [](const CheckRow& r) { return !r.pass(); });
                out << (failed == 0 ? "all checks passed" : std::to_string(failed) + " check(s) failed") << '\n';
                if (const auto target = output_target(cfg)) {
                    const auto table = checks_table(rows);
                    try {
                        write_atomically(*target, cfg.format == Format::json ? to_json(table) : to_csv(table));
                    } catch (const std::exception& e) {
                        throw OutputError(e.what());
                    }
                }
                return failed == 0 ? 0 : 1;
            }
            case Command::sweep:
                emit(sweep_table(cfg), cfg, out);
                return 0;
            case Command::evolve:
                emit(evolve_table(cfg), cfg, out);
                return 0;
        }
    } catch (const OutputError& e) {
        err << "geophase: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "geophase: " << e.what() << '\n';
        return 2;
    } catch (const std::out_of_range& e) {
        err << "geophase: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "geophase: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace geophase::cli
