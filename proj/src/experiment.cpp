#include "qrouter/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "qrouter/steady_state.hpp"

namespace qrouter {

namespace {

std::string fmt(double v, const char* spec) {
    if (v == 0.0) {
        return "0";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

// Data rows carry 12 significant digits; manifests carry 17 so every value
// survives the read-back bit-exactly.
std::string fmt12(double v) { return fmt(v, "%.12g"); }
std::string fmt17(double v) { return fmt(v, "%.17g"); }

const char* kind_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Spectrum: return "spectrum";
        case ExperimentKind::Scatter: return "scatter";
        case ExperimentKind::OverlapSweep: return "overlap_sweep";
        case ExperimentKind::Entangle: return "entangle";
        case ExperimentKind::Purify: return "purify";
        case ExperimentKind::Ghz: return "ghz";
        case ExperimentKind::Sweep: return "sweep";
    }
    return "?";
}

ExperimentKind kind_from(const std::string& name) {
    for (ExperimentKind k :
         {ExperimentKind::Spectrum, ExperimentKind::Scatter,
          ExperimentKind::OverlapSweep, ExperimentKind::Entangle,
          ExperimentKind::Purify, ExperimentKind::Ghz, ExperimentKind::Sweep}) {
        if (name == kind_name(k)) {
            return k;
        }
    }
    throw Error(ErrorCode::ConfigInvalid, "unknown experiment '" + name + "'");
}

class KeyBag {
public:
    explicit KeyBag(const std::string& text) {
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos) {
                line.erase(hash);
            }
            const auto trim = [](std::string s) {
                const auto a = s.find_first_not_of(" \t\r");
                const auto b = s.find_last_not_of(" \t\r");
                return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
            };
            if (trim(line).empty()) {
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw Error(ErrorCode::ConfigInvalid,
                            "line " + std::to_string(lineno) + ": expected key = value");
            }
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty() || value.empty()) {
                throw Error(ErrorCode::ConfigInvalid,
                            "line " + std::to_string(lineno) + ": empty key or value");
            }
            if (!entries_.emplace(key, value).second) {
                throw Error(ErrorCode::ConfigInvalid, "duplicate key '" + key + "'");
            }
        }
        if (entries_.empty()) {
            throw Error(ErrorCode::ConfigInvalid, "configuration is empty");
        }
    }

    std::string take_string(const std::string& key, const std::string& fallback) {
        auto it = entries_.find(key);
        if (it == entries_.end()) {
            return fallback;
        }
        consumed_.insert(key);
        return it->second;
    }

    std::string require_string(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) {
            throw Error(ErrorCode::ConfigInvalid, "missing required key '" + key + "'");
        }
        consumed_.insert(key);
        return it->second;
    }

    double take_double(const std::string& key, double fallback) {
        auto it = entries_.find(key);
        if (it == entries_.end()) {
            return fallback;
        }
        consumed_.insert(key);
        return parse_double(key, it->second);
    }

    std::optional<double> take_optional(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) {
            return std::nullopt;
        }
        consumed_.insert(key);
        return parse_double(key, it->second);
    }

    int take_int(const std::string& key, int fallback) {
        auto it = entries_.find(key);
        if (it == entries_.end()) {
            return fallback;
        }
        consumed_.insert(key);
        try {
            std::size_t used = 0;
            const int v = std::stoi(it->second, &used);
            if (used != it->second.size()) {
                throw std::invalid_argument("");
            }
            return v;
        } catch (const std::exception&) {
            throw Error(ErrorCode::ConfigInvalid,
                        "key '" + key + "': not an integer: " + it->second);
        }
    }

    bool take_bool(const std::string& key, bool fallback) {
        auto it = entries_.find(key);
        if (it == entries_.end()) {
            return fallback;
        }
        consumed_.insert(key);
        if (it->second == "true" || it->second == "1") return true;
        if (it->second == "false" || it->second == "0") return false;
        throw Error(ErrorCode::ConfigInvalid,
                    "key '" + key + "': expected true/false, got " + it->second);
    }

    void finish() const {
        for (const auto& [key, value] : entries_) {
            if (consumed_.count(key) == 0) {
                throw Error(ErrorCode::ConfigInvalid, "unknown key '" + key + "'");
            }
        }
    }

private:
    double parse_double(const std::string& key, const std::string& raw) {
        try {
            std::size_t used = 0;
            const double v = std::stod(raw, &used);
            if (used != raw.size()) {
                throw std::invalid_argument("");
            }
            return v;
        } catch (const std::exception&) {
            throw Error(ErrorCode::ConfigInvalid,
                        "key '" + key + "': not a number: " + raw);
        }
    }

    std::map<std::string, std::string> entries_;
    std::set<std::string> consumed_;
};

std::size_t default_network_size(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Spectrum:
        case ExperimentKind::Scatter:
            return 1;
        case ExperimentKind::Ghz:
            return 3;
        default:
            return 2;
    }
}

} // namespace

NetworkConfig ExperimentConfig::network() const {
    NetworkConfig net;
    net.routers = routers;
    net.qubit_inits = qubits;
    net.arm_phases = arm_phases;
    return validate_network(std::move(net));
}

TimeGrid ExperimentConfig::grid() const {
    return make_time_grid(pulse_length, dt, tail);
}

ExperimentConfig parse_config_text(const std::string& text) {
    KeyBag bag(text);
    ExperimentConfig cfg;
    cfg.kind = kind_from(bag.require_string("experiment"));
    cfg.preset_name = bag.take_string("preset", "");
    cfg.out_dir = bag.take_string("out", "out");
    cfg.dt = bag.take_double("dt", 0.01);
    cfg.tail = bag.take_double("tail", 20.0);
    cfg.phase_aware = bag.take_bool("phase_aware", false);

    const int n_routers =
        bag.take_int("network.size", static_cast<int>(default_network_size(cfg.kind)));
    if (n_routers < 1 || n_routers > 12) {
        throw Error(ErrorCode::ConfigInvalid, "network.size out of range [1, 12]");
    }
    const auto n = static_cast<std::size_t>(n_routers);

    CqedParams base;
    base.g = bag.take_double("router.g", base.g);
    base.kappa1 = bag.take_double("router.kappa1", base.kappa1);
    base.kappa2 = bag.take_double("router.kappa2", base.kappa2);
    base.kappa_loss = bag.take_double("router.kappa_loss", base.kappa_loss);
    base.gamma = bag.take_double("router.gamma", base.gamma);
    base.delta_a = bag.take_double("router.delta_a", base.delta_a);
    base.delta_c = bag.take_double("router.delta_c", base.delta_c);
    cfg.routers.assign(n, base);
    for (std::size_t k = 0; k < n; ++k) {
        const std::string prefix = "router" + std::to_string(k + 1) + ".";
        CqedParams& r = cfg.routers[k];
        r.g = bag.take_double(prefix + "g", r.g);
        r.kappa1 = bag.take_double(prefix + "kappa1", r.kappa1);
        r.kappa2 = bag.take_double(prefix + "kappa2", r.kappa2);
        r.kappa_loss = bag.take_double(prefix + "kappa_loss", r.kappa_loss);
        r.gamma = bag.take_double(prefix + "gamma", r.gamma);
        r.delta_a = bag.take_double(prefix + "delta_a", r.delta_a);
        r.delta_c = bag.take_double(prefix + "delta_c", r.delta_c);
    }

    QubitInit qbase;
    qbase.theta = bag.take_double("qubit.theta", qbase.theta);
    qbase.phi = bag.take_double("qubit.phi", qbase.phi);
    cfg.qubits.assign(n, qbase);
    for (std::size_t k = 0; k < n; ++k) {
        const std::string prefix = "qubit" + std::to_string(k + 1) + ".";
        cfg.qubits[k].theta = bag.take_double(prefix + "theta", cfg.qubits[k].theta);
        cfg.qubits[k].phi = bag.take_double(prefix + "phi", cfg.qubits[k].phi);
    }

    cfg.arm_phases.assign(n > 0 ? n - 1 : 0, 0.0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        cfg.arm_phases[k] =
            bag.take_double("network.arm_phase" + std::to_string(k + 1), 0.0);
    }

    cfg.pulse_length = bag.take_double("pulse.length", 400.0);
    cfg.pulse_center = bag.take_optional("pulse.center");
    cfg.pulse_width = bag.take_optional("pulse.width");

    switch (cfg.kind) {
        case ExperimentKind::Spectrum:
            cfg.spectrum_min = bag.take_double("spectrum.delta_min", -15.0);
            cfg.spectrum_max = bag.take_double("spectrum.delta_max", 15.0);
            cfg.spectrum_points = bag.take_int("spectrum.points", 1201);
            if (cfg.spectrum_points < 2 || cfg.spectrum_min >= cfg.spectrum_max) {
                throw Error(ErrorCode::ConfigInvalid, "bad spectrum scan range");
            }
            break;
        case ExperimentKind::Scatter: {
            const std::string atom = bag.take_string("scatter.atom", "beta");
            if (atom == "alpha") {
                cfg.scatter_atom = AtomBasis::Alpha;
            } else if (atom == "beta") {
                cfg.scatter_atom = AtomBasis::Beta;
            } else {
                throw Error(ErrorCode::ConfigInvalid,
                            "scatter.atom must be alpha or beta");
            }
            cfg.scatter_port = bag.take_int("scatter.port", 1);
            if (cfg.scatter_port != 1 && cfg.scatter_port != 2) {
                throw Error(ErrorCode::ConfigInvalid, "scatter.port must be 1 or 2");
            }
            break;
        }
        case ExperimentKind::Purify:
            cfg.n_max = bag.take_int("purify.n_max", 5);
            if (cfg.n_max < 1 || cfg.n_max > 64) {
                throw Error(ErrorCode::ConfigInvalid, "purify.n_max out of range");
            }
            break;
        case ExperimentKind::Ghz:
            cfg.ghz_n = bag.take_int("ghz.n", 1);
            if (cfg.ghz_n < 1 || cfg.ghz_n > 64) {
                throw Error(ErrorCode::ConfigInvalid, "ghz.n out of range");
            }
            break;
        case ExperimentKind::OverlapSweep:
        case ExperimentKind::Sweep: {
            const bool overlap_kind = cfg.kind == ExperimentKind::OverlapSweep;
            cfg.axis.name = bag.take_string("sweep.axis",
                                            overlap_kind ? "pulse.length" : "");
            cfg.axis.metric = bag.take_string("sweep.metric",
                                              overlap_kind ? "overlap" : "");
            cfg.axis.start = bag.take_double("sweep.start", overlap_kind ? 40.0 : 0.0);
            cfg.axis.stop = bag.take_double("sweep.stop", overlap_kind ? 400.0 : 0.0);
            cfg.axis.count = bag.take_int("sweep.count", overlap_kind ? 19 : 0);
            if (cfg.axis.count < 2) {
                throw Error(ErrorCode::ConfigInvalid,
                            "sweep.count must be at least 2");
            }
            if (!(cfg.axis.start < cfg.axis.stop)) {
                throw Error(ErrorCode::ConfigInvalid, "sweep.start must be < sweep.stop");
            }
            if (cfg.axis.name != "pulse.length" && cfg.axis.name != "router.g") {
                throw Error(ErrorCode::ConfigInvalid,
                            "sweep.axis must be pulse.length or router.g");
            }
            if (cfg.axis.metric != "overlap" && cfg.axis.metric != "entangle") {
                throw Error(ErrorCode::ConfigInvalid,
                            "sweep.metric must be overlap or entangle");
            }
            if (cfg.axis.name == "pulse.length" &&
                (cfg.pulse_center || cfg.pulse_width)) {
                throw Error(ErrorCode::ConfigInvalid,
                            "pulse.center/width cannot be fixed while sweeping "
                            "pulse.length (t0 = w = T/5 is used)");
            }
            break;
        }
        case ExperimentKind::Entangle:
            break;
    }

    bag.finish();
    cfg.network(); // validates router/qubit/arm lists
    cfg.grid();    // validates T, dt, tail
    return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::ConfigInvalid, "cannot read " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    // The output directory is deliberately not serialized: table contents
    // must not depend on where they are written.
    out << "experiment = " << kind_name(cfg.kind) << "\n";
    if (!cfg.preset_name.empty()) {
        out << "preset = " << cfg.preset_name << "\n";
    }
    out << "dt = " << fmt17(cfg.dt) << "\n";
    out << "tail = " << fmt17(cfg.tail) << "\n";
    out << "phase_aware = " << (cfg.phase_aware ? "true" : "false") << "\n";
    out << "network.size = " << cfg.routers.size() << "\n";
    for (std::size_t k = 0; k < cfg.routers.size(); ++k) {
        const std::string p = "router" + std::to_string(k + 1) + ".";
        const CqedParams& r = cfg.routers[k];
        out << p << "g = " << fmt17(r.g) << "\n";
        out << p << "kappa1 = " << fmt17(r.kappa1) << "\n";
        out << p << "kappa2 = " << fmt17(r.kappa2) << "\n";
        out << p << "kappa_loss = " << fmt17(r.kappa_loss) << "\n";
        out << p << "gamma = " << fmt17(r.gamma) << "\n";
        out << p << "delta_a = " << fmt17(r.delta_a) << "\n";
        out << p << "delta_c = " << fmt17(r.delta_c) << "\n";
    }
    for (std::size_t k = 0; k < cfg.qubits.size(); ++k) {
        const std::string p = "qubit" + std::to_string(k + 1) + ".";
        out << p << "theta = " << fmt17(cfg.qubits[k].theta) << "\n";
        out << p << "phi = " << fmt17(cfg.qubits[k].phi) << "\n";
    }
    for (std::size_t k = 0; k < cfg.arm_phases.size(); ++k) {
        out << "network.arm_phase" << (k + 1) << " = " << fmt17(cfg.arm_phases[k])
            << "\n";
    }
    out << "pulse.length = " << fmt17(cfg.pulse_length) << "\n";
    if (cfg.pulse_center) {
        out << "pulse.center = " << fmt17(*cfg.pulse_center) << "\n";
    }
    if (cfg.pulse_width) {
        out << "pulse.width = " << fmt17(*cfg.pulse_width) << "\n";
    }
    switch (cfg.kind) {
        case ExperimentKind::Spectrum:
            out << "spectrum.delta_min = " << fmt17(cfg.spectrum_min) << "\n";
            out << "spectrum.delta_max = " << fmt17(cfg.spectrum_max) << "\n";
            out << "spectrum.points = " << cfg.spectrum_points << "\n";
            break;
        case ExperimentKind::Scatter:
            out << "scatter.atom = "
                << (cfg.scatter_atom == AtomBasis::Alpha ? "alpha" : "beta") << "\n";
            out << "scatter.port = " << cfg.scatter_port << "\n";
            break;
        case ExperimentKind::Purify:
            out << "purify.n_max = " << cfg.n_max << "\n";
            break;
        case ExperimentKind::Ghz:
            out << "ghz.n = " << cfg.ghz_n << "\n";
            break;
        case ExperimentKind::OverlapSweep:
        case ExperimentKind::Sweep:
            out << "sweep.axis = " << cfg.axis.name << "\n";
            out << "sweep.metric = " << cfg.axis.metric << "\n";
            out << "sweep.start = " << fmt17(cfg.axis.start) << "\n";
            out << "sweep.stop = " << fmt17(cfg.axis.stop) << "\n";
            out << "sweep.count = " << cfg.axis.count << "\n";
            break;
        case ExperimentKind::Entangle:
            break;
    }
    return out.str();
}

std::vector<std::string> preset_names() {
    return {"fig1", "fig3", "fig4", "fig5-g2", "fig5-g3"};
}

bool is_preset(const std::string& name) {
    const auto names = preset_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

ExperimentConfig preset(const std::string& name) {
    // The pulse-scattering presets quote the atom's dipole decay rate:
    // gamma = kappa/2, i.e. an excited-state population decay equal to
    // kappa, alongside g in units of kappa and kappa1 = kappa2 = 0.45.
    CqedParams router;
    router.kappa1 = 0.45;
    router.kappa2 = 0.45;
    router.kappa_loss = 0.1;
    router.gamma = 0.5;

    ExperimentConfig cfg;
    cfg.preset_name = name;
    if (name == "fig1") {
        cfg.kind = ExperimentKind::Spectrum;
        CqedParams cavity;
        cavity.g = 10.0;
        cavity.kappa1 = 0.5;
        cavity.kappa2 = 0.5;
        cavity.kappa_loss = 0.0;
        cavity.gamma = 0.5;
        cfg.routers = {cavity};
        cfg.qubits = {QubitInit{}};
    } else if (name == "fig3") {
        cfg.kind = ExperimentKind::Entangle;
        router.g = 3.0;
        cfg.routers = {router, router};
        cfg.qubits = {QubitInit{}, QubitInit{}};
        cfg.arm_phases = {0.0};
    } else if (name == "fig4") {
        cfg.kind = ExperimentKind::OverlapSweep;
        router.g = 3.0;
        cfg.routers = {router, router};
        cfg.qubits = {QubitInit{}, QubitInit{}};
        cfg.arm_phases = {0.0};
        cfg.axis = SweepAxis{"pulse.length", 40.0, 400.0, 19, "overlap"};
    } else if (name == "fig5-g2" || name == "fig5-g3") {
        cfg.kind = ExperimentKind::Purify;
        router.g = (name == "fig5-g2") ? 2.0 : 3.0;
        cfg.routers = {router, router};
        cfg.qubits = {QubitInit{}, QubitInit{}};
        cfg.arm_phases = {0.0};
        cfg.n_max = 5;
    } else {
        throw Error(ErrorCode::ConfigInvalid, "unknown preset '" + name + "'");
    }
    return cfg;
}

namespace {

class CsvFile {
public:
    CsvFile(const std::filesystem::path& path, const ExperimentConfig& cfg,
            const std::vector<std::string>& extra_meta,
            const std::string& header)
        : out_(path, std::ios::binary) {
        if (!out_) {
            throw Error(ErrorCode::ConfigInvalid, "cannot write " + path.string());
        }
        std::istringstream meta(serialize_config(cfg));
        std::string line;
        while (std::getline(meta, line)) {
            out_ << "# " << line << "\n";
        }
        for (const std::string& extra : extra_meta) {
            out_ << "# " << extra << "\n";
        }
        out_ << header << "\n";
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ",";
            out_ << cells[i];
        }
        out_ << "\n";
    }

private:
    std::ofstream out_;
};

std::vector<std::string> budget_meta(const LossBudget& loss) {
    return {
        "input_norm = " + fmt12(loss.input_norm),
        "output_norm = " + fmt12(loss.output_norm),
        "cavity_loss = " + fmt12(loss.cavity_loss),
        "atomic_loss = " + fmt12(loss.atomic_loss),
        "residual = " + fmt12(loss.residual),
    };
}

// Fidelity variant used for summary columns; the *_aware columns always
// carry the phase-aware value regardless.
double summary_fidelity(const ExperimentConfig& cfg, const DetectorCoefficients& c,
                        Detector d, int n) {
    return fidelity(c, d, n, {.phase_aware = cfg.phase_aware});
}

std::vector<double> linspace(double start, double stop, int count) {
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        v.push_back(start + (stop - start) * static_cast<double>(k) /
                                static_cast<double>(count - 1));
    }
    return v;
}

double sweep_overlap_at(const ExperimentConfig& cfg, double pulse_length) {
    const TimeGrid grid = make_time_grid(pulse_length, cfg.dt, cfg.tail);
    const PulseSpec spec{pulse_length / 5.0, pulse_length / 5.0};
    const ComplexSignal input = gaussian_pulse(grid, spec);
    const NetworkConfig net = cfg.network();
    const std::size_t n = net.size();
    const auto aa = propagate_combo(net, ComboKey::from_index(0, n), input);
    const auto bb =
        propagate_combo(net, ComboKey::from_index((std::size_t{1} << n) - 1, n), input);
    return signal_overlap(aa.d1, bb.d1);
}

void run_spectrum(const ExperimentConfig& cfg, const std::filesystem::path& dir,
                  RunOutput& output) {
    const auto scan = default_detuning_scan(cfg.spectrum_min, cfg.spectrum_max,
                                            cfg.spectrum_points);
    const auto rows = spectrum(cfg.routers.at(0), scan);
    const auto path = dir / "spectrum.csv";
    CsvFile csv(path, cfg, {}, "delta,r2_empty,t2_empty,r2_coupled,t2_coupled");
    for (const SpectrumRow& r : rows) {
        csv.row({fmt12(r.delta), fmt12(r.r2_empty), fmt12(r.t2_empty),
                 fmt12(r.r2_coupled), fmt12(r.t2_coupled)});
    }
    output.files.push_back(path);
}

void run_scatter(const ExperimentConfig& cfg, const std::filesystem::path& dir,
                 RunOutput& output) {
    const TimeGrid grid = cfg.grid();
    const ComplexSignal pulse =
        gaussian_pulse(grid, PulseSpec{cfg.pulse_t0(), cfg.pulse_w()});
    const ComplexSignal vacuum = ComplexSignal::zeros(grid);
    const ComplexSignal& in1 = (cfg.scatter_port == 1) ? pulse : vacuum;
    const ComplexSignal& in2 = (cfg.scatter_port == 1) ? vacuum : pulse;
    const ScatterResult result =
        scatter_router(cfg.routers.at(0), cfg.scatter_atom, in1, in2);

    const auto path = dir / "scatter.csv";
    CsvFile csv(path, cfg, budget_meta(result.loss),
                "t,in_abs,out1_re,out1_im,out2_re,out2_im,c_cavity_abs,c_atom_abs");
    for (std::size_t k = 0; k < grid.n_samples; ++k) {
        csv.row({fmt12(grid.time_at(k)), fmt12(std::abs(pulse[k])),
                 fmt12(result.out1[k].real()), fmt12(result.out1[k].imag()),
                 fmt12(result.out2[k].real()), fmt12(result.out2[k].imag()),
                 fmt12(std::abs(result.trace.c_cavity[k])),
                 fmt12(std::abs(result.trace.c_atom[k]))});
    }
    output.files.push_back(path);
}

void run_overlap_sweep(const ExperimentConfig& cfg, const std::filesystem::path& dir,
                       RunOutput& output) {
    const auto path = dir / "overlap.csv";
    CsvFile csv(path, cfg, {}, "T,overlap");
    for (double T : linspace(cfg.axis.start, cfg.axis.stop, cfg.axis.count)) {
        csv.row({fmt12(T), fmt12(sweep_overlap_at(cfg, T))});
    }
    output.files.push_back(path);
}

void run_entangle(const ExperimentConfig& cfg, const std::filesystem::path& dir,
                  RunOutput& output) {
    const TimeGrid grid = cfg.grid();
    const ComplexSignal input =
        gaussian_pulse(grid, PulseSpec{cfg.pulse_t0(), cfg.pulse_w()});
    const NetworkConfig net = cfg.network();
    const ComboTable table = all_combo_outputs(net, input);
    const DetectorCoefficients coeffs = combo_coefficients(table);
    const auto keys = ComboKey::enumerate(net.size());

    {
        std::string header = "t,in_abs";
        for (const auto& key : keys) header += ",d1_" + key.label() + "_abs";
        for (const auto& key : keys) header += ",d2_" + key.label() + "_abs";
        const auto path = dir / "pulses.csv";
        CsvFile csv(path, cfg, {}, header);
        for (std::size_t k = 0; k < grid.n_samples; ++k) {
            std::vector<std::string> cells{fmt12(grid.time_at(k)),
                                           fmt12(std::abs(input[k]))};
            for (const auto& entry : table.entries) {
                cells.push_back(fmt12(std::abs(entry.d1[k])));
            }
            for (const auto& entry : table.entries) {
                cells.push_back(fmt12(std::abs(entry.d2[k])));
            }
            csv.row(cells);
        }
        output.files.push_back(path);
    }
    {
        const auto path = dir / "coefficients.csv";
        CsvFile csv(path, cfg, {}, "detector,combo,amp_abs,amp_phase");
        for (int d = 0; d < 2; ++d) {
            for (const auto& key : keys) {
                const complexd amp = coeffs.branch[d].amps[key.index()];
                csv.row({d == 0 ? "d1" : "d2", key.label(), fmt12(std::abs(amp)),
                         fmt12(std::arg(amp))});
            }
        }
        output.files.push_back(path);
    }
    if (net.size() == 2) {
        const auto path = dir / "entangle.csv";
        CsvFile csv(path, cfg, {}, "detector,a,b,c,d,p1,f1,f1_phase_aware");
        csv.row({"d1", fmt12(coeffs.a1()), fmt12(coeffs.b1()), fmt12(coeffs.c1()),
                 fmt12(coeffs.d1()),
                 fmt12(success_probability(coeffs, Detector::D1, 1)),
                 fmt12(summary_fidelity(cfg, coeffs, Detector::D1, 1)),
                 fmt12(fidelity(coeffs, Detector::D1, 1, {.phase_aware = true}))});
        csv.row({"d2", fmt12(coeffs.a2()), fmt12(coeffs.b2()), fmt12(coeffs.c2()),
                 fmt12(coeffs.d2()),
                 fmt12(success_probability(coeffs, Detector::D2, 1)),
                 fmt12(summary_fidelity(cfg, coeffs, Detector::D2, 1)),
                 fmt12(fidelity(coeffs, Detector::D2, 1, {.phase_aware = true}))});
        output.files.push_back(path);

        const auto spath = dir / "states.csv";
        CsvFile scsv(spath, cfg, {}, "detector,basis,re,im");
        for (int d = 0; d < 2; ++d) {
            const StateVector state = conditional_state(
                coeffs, d == 0 ? Detector::D1 : Detector::D2, 1);
            for (const auto& key : keys) {
                const complexd amp = state[key.index()];
                scsv.row({d == 0 ? "d1" : "d2", key.label(), fmt12(amp.real()),
                          fmt12(amp.imag())});
            }
        }
        output.files.push_back(spath);
    }
}

void run_purify(const ExperimentConfig& cfg, const std::filesystem::path& dir,
                RunOutput& output) {
    const TimeGrid grid = cfg.grid();
    const ComplexSignal input =
        gaussian_pulse(grid, PulseSpec{cfg.pulse_t0(), cfg.pulse_w()});
    const NetworkConfig net = cfg.network();
    if (net.size() != 2) {
        throw Error(ErrorCode::ConfigInvalid, "purify needs network.size = 2");
    }
    const DetectorCoefficients coeffs =
        detector_coefficients(all_combo_outputs(net, input));
    const EntanglementReport report = purification_report(coeffs, cfg.n_max);

    const auto path = dir / "purify.csv";
    CsvFile csv(path, cfg, {}, "n,f_d1,f_d2,f_d1_aware,f_d2_aware,p_d1,p_d2");
    for (const PurificationRow& row : report.rows) {
        const double f_d1 = cfg.phase_aware ? row.fidelity_d1_aware : row.fidelity_d1;
        const double f_d2 = cfg.phase_aware ? row.fidelity_d2_aware : row.fidelity_d2;
        csv.row({std::to_string(row.n), fmt12(f_d1), fmt12(f_d2),
                 fmt12(row.fidelity_d1_aware), fmt12(row.fidelity_d2_aware),
                 fmt12(row.prob_d1), fmt12(row.prob_d2)});
    }
    output.files.push_back(path);
}

void run_ghz(const ExperimentConfig& cfg, const std::filesystem::path& dir,
             RunOutput& output) {
    if (cfg.routers.size() != 3) {
        throw Error(ErrorCode::ConfigInvalid, "ghz needs network.size = 3");
    }
    const TimeGrid grid = cfg.grid();
    const ComplexSignal input =
        gaussian_pulse(grid, PulseSpec{cfg.pulse_t0(), cfg.pulse_w()});

    auto link = [&](std::size_t other) {
        NetworkConfig net;
        net.routers = {cfg.routers[0], cfg.routers[other]};
        net.qubit_inits = {cfg.qubits[0], cfg.qubits[other]};
        net.arm_phases = {0.0};
        return detector_coefficients(all_combo_outputs(net, input));
    };
    const DetectorCoefficients link12 = link(1);
    const DetectorCoefficients link13 = link(2);

    const int n = cfg.ghz_n;
    const StateVector d1_12 = conditional_state(link12, Detector::D1, n);
    const StateVector d1_13 = conditional_state(link13, Detector::D1, n);
    // A D2 click plus a bit flip on the non-shared qubit heralds the same
    // entangled pair as a D1 click.
    const StateVector d2_12 = local_correction(conditional_state(link12, Detector::D2, n), 1);
    const StateVector d2_13 = local_correction(conditional_state(link13, Detector::D2, n), 1);

    const auto path = dir / "ghz.csv";
    CsvFile csv(path, cfg, {}, "route,fidelity,below_threshold,p_link12,p_link13");
    struct Route {
        const char* name;
        const StateVector* a;
        const StateVector* b;
        Detector da;
        Detector db;
    };
    const Route routes[] = {
        {"d1_d1", &d1_12, &d1_13, Detector::D1, Detector::D1},
        {"d1_d2c", &d1_12, &d2_13, Detector::D1, Detector::D2},
        {"d2c_d1", &d2_12, &d1_13, Detector::D2, Detector::D1},
        {"d2c_d2c", &d2_12, &d2_13, Detector::D2, Detector::D2},
    };
    for (const Route& r : routes) {
        const GhzResult ghz = ghz_compose(*r.a, *r.b);
        csv.row({r.name, fmt12(ghz.fidelity), ghz.below_threshold ? "1" : "0",
                 fmt12(success_probability(link12, r.da, n)),
                 fmt12(success_probability(link13, r.db, n))});
    }
    output.files.push_back(path);
}

void run_sweep(const ExperimentConfig& cfg, const std::filesystem::path& dir,
               RunOutput& output) {
    const auto points = linspace(cfg.axis.start, cfg.axis.stop, cfg.axis.count);
    const auto path = dir / "sweep.csv";
    if (cfg.axis.metric == "overlap") {
        if (cfg.axis.name != "pulse.length") {
            throw Error(ErrorCode::ConfigInvalid,
                        "metric overlap requires axis pulse.length");
        }
        CsvFile csv(path, cfg, {}, "T,overlap");
        for (double T : points) {
            csv.row({fmt12(T), fmt12(sweep_overlap_at(cfg, T))});
        }
    } else {
        if (cfg.axis.name != "router.g") {
            throw Error(ErrorCode::ConfigInvalid,
                        "metric entangle requires axis router.g");
        }
        if (cfg.routers.size() != 2) {
            throw Error(ErrorCode::ConfigInvalid, "entangle sweep needs network.size = 2");
        }
        const TimeGrid grid = cfg.grid();
        const ComplexSignal input =
            gaussian_pulse(grid, PulseSpec{cfg.pulse_t0(), cfg.pulse_w()});
        CsvFile csv(path, cfg, {},
                    "g,a1,b1,a1_b1_gap,f1_d1,f1_d2,p1_d1,p1_d2");
        for (double g : points) {
            ExperimentConfig at = cfg;
            for (CqedParams& r : at.routers) {
                r.g = g;
            }
            const DetectorCoefficients coeffs =
                detector_coefficients(all_combo_outputs(at.network(), input));
            csv.row({fmt12(g), fmt12(coeffs.a1()), fmt12(coeffs.b1()),
                     fmt12(std::abs(coeffs.a1() - coeffs.b1())),
                     fmt12(summary_fidelity(cfg, coeffs, Detector::D1, 1)),
                     fmt12(summary_fidelity(cfg, coeffs, Detector::D2, 1)),
                     fmt12(success_probability(coeffs, Detector::D1, 1)),
                     fmt12(success_probability(coeffs, Detector::D2, 1))});
        }
    }
    output.files.push_back(path);
}

} // namespace

RunOutput run_experiment(const ExperimentConfig& cfg) {
    const std::filesystem::path dir(cfg.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw Error(ErrorCode::ConfigInvalid,
                    "cannot create output directory " + dir.string());
    }
    RunOutput output;
    switch (cfg.kind) {
        case ExperimentKind::Spectrum: run_spectrum(cfg, dir, output); break;
        case ExperimentKind::Scatter: run_scatter(cfg, dir, output); break;
        case ExperimentKind::OverlapSweep: run_overlap_sweep(cfg, dir, output); break;
        case ExperimentKind::Entangle: run_entangle(cfg, dir, output); break;
        case ExperimentKind::Purify: run_purify(cfg, dir, output); break;
        case ExperimentKind::Ghz: run_ghz(cfg, dir, output); break;
        case ExperimentKind::Sweep: run_sweep(cfg, dir, output); break;
    }
    const auto manifest_path = dir / "manifest.txt";
    {
        std::ofstream manifest(manifest_path, std::ios::binary);
        if (!manifest) {
            throw Error(ErrorCode::ConfigInvalid,
                        "cannot write " + manifest_path.string());
        }
        manifest << "# run manifest; re-run with: simulate <this file> --out DIR\n";
        manifest << serialize_config(cfg);
    }
    output.files.push_back(manifest_path);
    return output;
}

int exit_code_for(const Error& err) {
    return err.code() == ErrorCode::ConfigInvalid ? 2 : 3;
}

} // namespace qrouter
