// router_network.hpp — one photon through an ordered chain of N routers.
//
// Geometry: the pulse enters in1 of stage 1 (in2 is vacuum); stage-k out1
// feeds stage-(k+1) in1 and stage-k out2 feeds stage-(k+1) in2 with phase
// e^{i arm_phase[k]} on the out2 link. The two detector ports d1/d2 are
// out1/out2 of stage N. Because the atoms stay in their ground manifold,
// each of the 2^N atomic basis combinations scatters independently.

#pragma once

#include <string>
#include <vector>

#include "qrouter/params.hpp"
#include "qrouter/pulse_dynamics.hpp"
#include "qrouter/signal.hpp"

namespace qrouter {

// One atomic basis combination, e.g. (Alpha, Beta) for N = 2.
// Index order: router 1 is the most significant bit, Alpha = 0, Beta = 1,
// so for N = 2 the order is aa, ab, ba, bb.
struct ComboKey {
    std::vector<AtomBasis> basis;

    std::size_t index() const;
    std::string label() const; // e.g. "ab"
    static ComboKey from_index(std::size_t idx, std::size_t n);
    static std::vector<ComboKey> enumerate(std::size_t n);
};

struct PortPair {
    ComplexSignal d1;
    ComplexSignal d2;
};

// Detector-port signals for every basis combination, indexed by
// ComboKey::index(). Keeps the input pulse for phase referencing.
struct ComboTable {
    NetworkConfig network;
    ComplexSignal input;
    std::vector<PortPair> entries;

    std::size_t router_count() const { return network.size(); }
    const PortPair& at(const ComboKey& key) const { return entries.at(key.index()); }
};

PortPair propagate_combo(const NetworkConfig& net, const ComboKey& combo,
                         const ComplexSignal& input,
                         const ScatterOptions& opts = {});

// Runs propagate_combo for all 2^N combinations, in index order.
ComboTable all_combo_outputs(const NetworkConfig& net, const ComplexSignal& input,
                             const ScatterOptions& opts = {});

// Shape overlap of the two d1 branches that interfere on detector 1:
// all-Alpha (every stage transmitted) vs all-Beta (every stage reflected).
// Requires N >= 2. Throws WrongArity / ZeroSignal.
double path_mismatch(const ComboTable& table);

// The same table for perfect routers: unit reflection for Beta, unit
// transmission for Alpha, no loss and no bandwidth filtering, arm phases
// applied on the out2 links. Routing amplitudes are +1, matching the
// algebraic beam-splitter picture; this is the reference against which
// the composed-state constructions are checked.
ComboTable ideal_combo_table(const NetworkConfig& net, const ComplexSignal& input);

} // namespace qrouter
