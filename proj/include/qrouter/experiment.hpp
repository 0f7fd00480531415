// experiment.hpp — configuration-driven experiment runner.
//
// Configs are flat key = value text (see README for the grammar); named
// presets pin the parameter sets behind the published spectra, pulse
// shapes, overlap and purification curves. Every run writes deterministic
// CSV tables plus a manifest that re-runs the experiment exactly.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qrouter/entanglement.hpp"
#include "qrouter/params.hpp"
#include "qrouter/signal.hpp"

namespace qrouter {

enum class ExperimentKind {
    Spectrum,     // CW power spectra vs detuning
    Scatter,      // one router, one pulse, time series
    OverlapSweep, // d1 path overlap vs pulse length
    Entangle,     // N-router chain: coefficients, states, pulse shapes
    Purify,       // fidelity / success probability vs photon number
    Ghz,          // two heralded links composed into a GHZ state
    Sweep,        // generic axis sweep
};

struct SweepAxis {
    std::string name;   // "pulse.length" or "router.g"
    double start = 0.0;
    double stop = 0.0;
    int count = 0;
    std::string metric; // "overlap" or "entangle"
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Spectrum;
    std::vector<CqedParams> routers; // size = network size
    std::vector<QubitInit> qubits;
    std::vector<double> arm_phases;

    double pulse_length = 400.0;
    std::optional<double> pulse_center; // default T/5
    std::optional<double> pulse_width;  // default T/5
    double dt = 0.01;
    double tail = 20.0;
    bool phase_aware = false;

    double spectrum_min = -15.0;
    double spectrum_max = 15.0;
    int spectrum_points = 1201;

    AtomBasis scatter_atom = AtomBasis::Beta;
    int scatter_port = 1;

    int n_max = 5;       // purify
    int ghz_n = 1; // photons per link

    SweepAxis axis;

    std::string out_dir = "out";
    std::string preset_name; // informational only

    double pulse_t0() const { return pulse_center.value_or(pulse_length / 5.0); }
    double pulse_w() const { return pulse_width.value_or(pulse_length / 5.0); }
    NetworkConfig network() const;
    TimeGrid grid() const;
};

// Parses config text / file. Unknown or malformed keys throw ConfigInvalid
// naming the offending key.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::filesystem::path& path);

// Re-parseable serialization of a fully resolved config (17 significant
// digits, so values survive the round trip bit-exactly).
std::string serialize_config(const ExperimentConfig& cfg);

std::vector<std::string> preset_names();
bool is_preset(const std::string& name);
ExperimentConfig preset(const std::string& name); // throws ConfigInvalid

struct RunOutput {
    std::vector<std::filesystem::path> files; // CSVs + manifest
};

RunOutput run_experiment(const ExperimentConfig& cfg);

// Exit status for the CLI: 0 ok, 2 config error, 3 solver/domain error.
int exit_code_for(const Error& err);

} // namespace qrouter
