#include "geophase/cli/config.hpp"

#include "geophase/errors.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace geophase::cli {

namespace {

constexpr double kPi = std::numbers::pi;

std::string shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// Turns a JSON config object into command-line tokens ("--key value").
std::vector<std::string> config_tokens(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config file '" + path + "' must hold a JSON object");

    std::vector<std::string> tokens;
    for (const auto& [key, value] : doc.items()) {
        std::string flag = "--" + key;
        for (auto& ch : flag)
            if (ch == '_') ch = '-';
        if (value.is_boolean()) {
            if (value.get<bool>()) tokens.push_back(flag);
        } else if (value.is_number_integer()) {
            tokens.push_back(flag);
            tokens.push_back(std::to_string(value.get<long long>()));
        } else if (value.is_number()) {
            tokens.push_back(flag);
            tokens.push_back(shortest(value.get<double>()));
        } else if (value.is_string()) {
            tokens.push_back(flag);
            tokens.push_back(value.get<std::string>());
        } else {
            throw ConfigError("config key '" + key + "' must be a number, string or boolean");
        }
    }
    return tokens;
}

void add_options(CLI::App& app, RunConfig& cfg, std::string& scenario, std::string& branch, std::string& format,
                 std::string& output, double& omega, std::string& config_path) {
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.add_option("--config", config_path, "JSON file with option values (flags override it)");
    app.add_option("--scenario", scenario, "classical | hybrid | oscillator | tradeoff | uncertainty");
    app.add_option("--B", cfg.B, "classical field magnitude");
    app.add_option("--theta", cfg.theta, "polar angle of the field (radians unless --degrees)");
    app.add_option("--mu", cfg.mu, "qubit-spin coupling");
    app.add_option("--j", cfg.j, "spin quantum number (integer or half-integer)");
    app.add_option("--m", cfg.m, "hybrid index m");
    app.add_option("--nu", cfg.nu, "oscillator frequency");
    app.add_option("--g", cfg.g, "Jaynes-Cummings coupling");
    app.add_option("--beta", cfg.beta, "displacement magnitude |beta|");
    app.add_option("--n", cfg.n, "oscillator index n");
    app.add_option("--nmax", cfg.nmax, "Fock truncation");
    app.add_option("--branch", branch, "eigenstate branch: + or -");
    app.add_option("--omega", omega, "rotation frequency (overrides --omega-ratio)");
    app.add_option("--omega-ratio", cfg.omega_ratio, "omega / B, or omega / nu for the oscillator");
    app.add_option("--tolerance", cfg.tolerance, "integrator tolerance in [1e-12, 1e-4]");
    app.add_option("--samples-per-period", cfg.samples_per_period, "output samples per rotation period (>= 400)");
    app.add_option("--periods", cfg.periods, "evolve: number of periods to dump");
    app.add_option("--max-periods", cfg.max_periods, "uncertainty: crossing search window in periods");
    app.add_option("--threads", cfg.threads, "worker threads for sweeps (0: all cores)");
    app.add_option("--sweep", cfg.sweep.parameter, "sweep axis: theta, mu, B, omega, nu, g, beta");
    app.add_option("--from", cfg.sweep.from, "first value of the sweep axis");
    app.add_option("--to", cfg.sweep.to, "last value of the sweep axis");
    app.add_option("--steps", cfg.sweep.steps, "number of sweep points (>= 1)");
    app.add_option("-o,--output", output, "output file");
    app.add_option("--format", format, "csv | json");
    app.add_flag("--amplitudes", cfg.amplitudes, "evolve: include state amplitudes");
    app.add_flag("--degrees", cfg.degrees, "angles are given in degrees");
}

}  // namespace

const char* to_string(Command c) {
    switch (c) {
        case Command::verify: return "verify";
        case Command::sweep: return "sweep";
        case Command::evolve: return "evolve";
    }
    return "?";
}

const char* to_string(Scenario s) {
    switch (s) {
        case Scenario::classical: return "classical";
        case Scenario::hybrid: return "hybrid";
        case Scenario::oscillator: return "oscillator";
        case Scenario::tradeoff: return "tradeoff";
        case Scenario::uncertainty: return "uncertainty";
    }
    return "?";
}

Scenario parse_scenario(const std::string& text) {
    if (text == "classical") return Scenario::classical;
    if (text == "hybrid") return Scenario::hybrid;
    if (text == "oscillator") return Scenario::oscillator;
    if (text == "tradeoff") return Scenario::tradeoff;
    if (text == "uncertainty") return Scenario::uncertainty;
    throw ConfigError("unknown scenario '" + text + "'");
}

Branch parse_branch(const std::string& text) {
    if (text == "+" || text == "plus") return Branch::plus;
    if (text == "-" || text == "minus") return Branch::minus;
    throw ConfigError("branch must be + or - (got '" + text + "')");
}

std::vector<double> SweepAxis::values() const {
    std::vector<double> out;
    if (steps == 1) {
        out.push_back(from);
        return out;
    }
    for (int i = 0; i < steps; ++i) {
        if (i == steps - 1) {
            out.push_back(to);
        } else {
            out.push_back(from + (to - from) * static_cast<double>(i) / static_cast<double>(steps - 1));
        }
    }
    return out;
}

double RunConfig::energy_scale() const {
    if (scenario == Scenario::oscillator) return nu;
    return B > 0.0 ? B : mu;
}

double RunConfig::resolved_omega() const {
    if (omega) return *omega;
    return omega_ratio * energy_scale();
}

HybridModel RunConfig::hybrid_model() const {
    HybridModel model;
    model.B = B;
    model.theta = theta;
    model.mu = mu;
    model.j = HalfInteger::from_double(j);
    model.omega = resolved_omega();
    return model;
}

HybridModel RunConfig::classical_model() const {
    return HybridModel::classical(B, theta, omega ? *omega : omega_ratio * B);
}

OscillatorModel RunConfig::oscillator_model() const {
    OscillatorModel model;
    model.nu = nu;
    model.g = g;
    model.beta_mag = beta;
    model.n_max = nmax;
    model.omega = resolved_omega();
    return model;
}

void RunConfig::validate() const {
    auto fail = [](const std::string& what) { throw InvalidParameter(what); };
    if (!(tolerance >= 1e-12 && tolerance <= 1e-4)) fail("--tolerance must lie in [1e-12, 1e-4]");
    if (samples_per_period < 400) fail("--samples-per-period must be >= 400");
    if (periods < 1) fail("--periods must be >= 1");
    if (max_periods < 1) fail("--max-periods must be >= 1");
    if (threads < 0) fail("--threads must be >= 0");
    if (sweep.steps < 1) fail("--steps must be >= 1");
    if (!sweep.parameter.empty()) {
        static const char* const known[] = {"theta", "mu", "B", "omega", "omega-ratio", "nu", "g", "beta"};
        if (std::find(std::begin(known), std::end(known), sweep.parameter) == std::end(known))
            fail("--sweep must be one of theta, mu, B, omega, omega-ratio, nu, g, beta");
    }
    if (omega && !(*omega > 0.0)) fail("--omega must be > 0");
    if (!omega && !(omega_ratio > 0.0)) fail("--omega-ratio must be > 0");

    switch (scenario) {
        case Scenario::classical:
            classical_model().validate();
            break;
        case Scenario::hybrid: {
            const auto model = hybrid_model();
            model.validate();
            const auto mm = HalfInteger::from_double(m);
            if (mm > model.j || mm < -(model.j + 1) || (mm.twice() - model.j.twice()) % 2 != 0)
                fail("--m must lie in {-(j+1), ..., j} in integer steps from j");
            break;
        }
        case Scenario::oscillator: {
            const auto model = oscillator_model();
            model.validate();
            if (n < -1 || n > nmax - 1) fail("--n must lie in [-1, nmax - 1]");
            if (nmax < OscillatorModel::required_n_max(n, beta)) {
                std::ostringstream os;
                os << "--nmax must be >= " << OscillatorModel::required_n_max(n, beta) << " for n = " << n;
                fail(os.str());
            }
            break;
        }
        case Scenario::tradeoff:
            if (!(B > 0.0)) fail("tradeoff: --B must be > 0");
            if (!(theta >= 0.0 && theta <= kPi)) fail("tradeoff: --theta must lie in [0, pi]");
            break;
        case Scenario::uncertainty: {
            if (!(theta > 0.0 && theta <= 0.5 * kPi + 1e-12)) fail("uncertainty: --theta must lie in (0, pi/2]");
            const auto model = classical_model();
            model.validate();
            if (model.omega / model.B > 1e-2 * (1.0 + 1e-12)) fail("uncertainty: omega / B must be <= 1e-2");
            break;
        }
    }
}

RunConfig parse_arguments(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);

    // Config file values go in front of the explicit flags so that the flags win.
    std::vector<std::string> expanded;
    std::vector<std::string> rest;
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw ConfigError("--config needs a file name");
            config_path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (!rest.empty()) expanded.push_back(rest.front());
    if (!config_path.empty()) {
        const auto tokens = config_tokens(config_path);
        expanded.insert(expanded.end(), tokens.begin(), tokens.end());
    }
    if (rest.size() > 1) expanded.insert(expanded.end(), rest.begin() + 1, rest.end());

    RunConfig cfg;
    std::string scenario = "hybrid";
    std::string branch = "-";
    std::string format = "csv";
    std::string output;
    double omega = 0.0;
    std::string unused_config;

    CLI::App app{"geophase: geometric phase, entanglement and time-energy uncertainty in rotating fields"};
    app.name("geophase");
    app.require_subcommand(1);
    auto* verify = app.add_subcommand("verify", "run closed-form vs numeric checks and print a table");
    auto* sweep = app.add_subcommand("sweep", "evaluate a parameter grid and write CSV/JSON rows");
    auto* evolve = app.add_subcommand("evolve", "write a single trajectory with diagnostics");
    for (auto* sub : {verify, sweep, evolve})
        add_options(*sub, cfg, scenario, branch, format, output, omega, unused_config);

    std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        for (auto* sub : {verify, sweep, evolve})
            if (sub->parsed()) {
                auto text = sub->help();
                const std::string usage = "Usage: " + sub->get_name();
                if (const auto at = text.find(usage); at != std::string::npos)
                    text.replace(at, usage.size(), "Usage: geophase " + sub->get_name());
                throw HelpRequested{text};
            }
        throw HelpRequested{app.help()};
    } catch (const CLI::CallForAllHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }

    CLI::App* chosen = verify->parsed() ? verify : (sweep->parsed() ? sweep : evolve);
    cfg.command = chosen == verify ? Command::verify : (chosen == sweep ? Command::sweep : Command::evolve);
    cfg.scenario = parse_scenario(scenario);
    cfg.branch = parse_branch(branch);
    if (chosen->count("--omega") > 0) cfg.omega = omega;
    if (!output.empty()) cfg.output = output;
    if (format == "csv") {
        cfg.format = Format::csv;
    } else if (format == "json") {
        cfg.format = Format::json;
    } else {
        throw ConfigError("--format must be csv or json");
    }
    if (cfg.degrees) {
        cfg.theta *= kPi / 180.0;
        if (cfg.sweep.parameter == "theta") {
            cfg.sweep.from *= kPi / 180.0;
            cfg.sweep.to *= kPi / 180.0;
        }
    }
    if (cfg.scenario == Scenario::tradeoff && cfg.sweep.parameter.empty()) {
        cfg.sweep.parameter = "mu";
        if (chosen->count("--from") == 0) cfg.sweep.from = 1.0;
        if (chosen->count("--to") == 0) cfg.sweep.to = 0.0;
        if (chosen->count("--steps") == 0) cfg.sweep.steps = 10;
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

}  // namespace geophase::cli
