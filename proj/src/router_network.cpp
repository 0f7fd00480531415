#include "qrouter/router_network.hpp"

#include <cmath>
#include <complex>
#include <string>

namespace qrouter {

std::size_t ComboKey::index() const {
    std::size_t idx = 0;
    for (AtomBasis b : basis) {
        idx = (idx << 1) | (b == AtomBasis::Beta ? 1u : 0u);
    }
    return idx;
}

std::string ComboKey::label() const {
    std::string s;
    s.reserve(basis.size());
    for (AtomBasis b : basis) {
        s.push_back(basis_char(b));
    }
    return s;
}

ComboKey ComboKey::from_index(std::size_t idx, std::size_t n) {
    ComboKey key;
    key.basis.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t bit = (idx >> (n - 1 - k)) & 1u;
        key.basis[k] = bit ? AtomBasis::Beta : AtomBasis::Alpha;
    }
    return key;
}

std::vector<ComboKey> ComboKey::enumerate(std::size_t n) {
    std::vector<ComboKey> keys;
    keys.reserve(std::size_t{1} << n);
    for (std::size_t idx = 0; idx < (std::size_t{1} << n); ++idx) {
        keys.push_back(from_index(idx, n));
    }
    return keys;
}

PortPair propagate_combo(const NetworkConfig& net_in, const ComboKey& combo,
                         const ComplexSignal& input, const ScatterOptions& opts) {
    const NetworkConfig net = validate_network(net_in);
    const std::size_t n = net.size();
    if (combo.basis.size() != n) {
        throw Error(ErrorCode::WrongArity,
                    "combo length " + std::to_string(combo.basis.size()) +
                        " vs " + std::to_string(n) + " routers");
    }
    ComplexSignal arm1 = input;
    ComplexSignal arm2 = ComplexSignal::zeros(input.grid());
    for (std::size_t k = 0; k < n; ++k) {
        ScatterResult stage =
            scatter_router(net.routers[k], combo.basis[k], arm1, arm2, opts);
        arm1 = std::move(stage.out1);
        arm2 = std::move(stage.out2);
        if (k + 1 < n) {
            const double phase = net.arm_phases[k];
            if (phase != 0.0) {
                arm2 = arm2.scaled(std::polar(1.0, phase));
            }
        }
    }
    return PortPair{std::move(arm1), std::move(arm2)};
}

ComboTable all_combo_outputs(const NetworkConfig& net_in, const ComplexSignal& input,
                             const ScatterOptions& opts) {
    const NetworkConfig net = validate_network(net_in);
    ComboTable table{net, input, {}};
    const auto keys = ComboKey::enumerate(net.size());
    table.entries.reserve(keys.size());
    for (const ComboKey& key : keys) {
        table.entries.push_back(propagate_combo(net, key, input, opts));
    }
    return table;
}

double path_mismatch(const ComboTable& table) {
    const std::size_t n = table.router_count();
    if (n < 2) {
        throw Error(ErrorCode::WrongArity, "path mismatch needs at least 2 routers");
    }
    const ComboKey all_alpha = ComboKey::from_index(0, n);
    const ComboKey all_beta = ComboKey::from_index((std::size_t{1} << n) - 1, n);
    return signal_overlap(table.at(all_alpha).d1, table.at(all_beta).d1);
}

ComboTable ideal_combo_table(const NetworkConfig& net_in, const ComplexSignal& input) {
    const NetworkConfig net = validate_network(net_in);
    const std::size_t n = net.size();
    ComboTable table{net, input, {}};
    table.entries.reserve(std::size_t{1} << n);
    for (const ComboKey& key : ComboKey::enumerate(n)) {
        // Perfect routing is a scalar amplitude per arm: reflection keeps
        // the arm, transmission swaps arms.
        complexd amp1{1.0, 0.0};
        complexd amp2{0.0, 0.0};
        for (std::size_t k = 0; k < n; ++k) {
            complexd next1, next2;
            if (key.basis[k] == AtomBasis::Beta) { // reflect
                next1 = amp1;
                next2 = amp2;
            } else { // transmit
                next1 = amp2;
                next2 = amp1;
            }
            if (k + 1 < n && net.arm_phases[k] != 0.0) {
                next2 *= std::polar(1.0, net.arm_phases[k]);
            }
            amp1 = next1;
            amp2 = next2;
        }
        table.entries.push_back(PortPair{input.scaled(amp1), input.scaled(amp2)});
    }
    return table;
}

} // namespace qrouter
