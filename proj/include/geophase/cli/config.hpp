// config.hpp — run configuration for the geophase command-line tool.

#pragma once

#include "geophase/models.hpp"
#include "geophase/spectra.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace geophase::cli {

enum class Command { verify, sweep, evolve };
enum class Scenario { classical, hybrid, oscillator, tradeoff, uncertainty };
enum class Format { csv, json };

const char* to_string(Command c);
const char* to_string(Scenario s);
Scenario parse_scenario(const std::string& text);
Branch parse_branch(const std::string& text);

struct SweepAxis {
    std::string parameter;  // empty: no sweep axis given
    double from{0.0};
    double to{0.0};
    int steps{1};

    std::vector<double> values() const;
};

struct RunConfig {
    Command command{Command::verify};
    Scenario scenario{Scenario::hybrid};

    // rotating field
    double B{1.0};
    double theta{1.0471975511965976};
    double mu{1.0};
    double j{0.5};
    double m{-0.5};
    // oscillator
    double nu{1.0};
    double g{1.0};
    double beta{0.5};
    int n{0};
    int nmax{60};

    Branch branch{Branch::minus};
    std::optional<double> omega;  // absolute rotation frequency
    double omega_ratio{1e-3};     // omega / B (field scenarios) or omega / nu (oscillator)

    double tolerance{1e-10};
    int samples_per_period{400};
    int periods{1};       // evolve: length of the dump in periods
    int max_periods{16};  // uncertainty: search window for the |gamma| = pi crossing
    int threads{0};       // 0: hardware concurrency
    bool amplitudes{false};
    bool degrees{false};

    SweepAxis sweep;
    std::optional<std::string> output;
    Format format{Format::csv};

    double resolved_omega() const;
    double energy_scale() const;  // B (or mu when B = 0) for field scenarios, nu for the oscillator
    HybridModel hybrid_model() const;
    HybridModel classical_model() const;
    OscillatorModel oscillator_model() const;

    // Throws InvalidParameter on any inconsistency.
    void validate() const;
};

// Parses argv (subcommand first). Options from a --config JSON file are applied first and
// overridden by explicit flags. Throws ConfigError; help requests throw HelpRequested.
RunConfig parse_arguments(int argc, const char* const* argv);

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct HelpRequested {
    std::string text;
};

}  // namespace geophase::cli
