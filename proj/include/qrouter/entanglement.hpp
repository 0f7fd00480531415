// entanglement.hpp — heralded states, fidelities and success probabilities.
//
// A click on detector d after one photon projects the N atoms onto
// sum_c q_c z_c |c>, where q_c is the initial-superposition amplitude of
// combination c and z_c the branch amplitude whose magnitude is
// sqrt(integral |f_c_out_d|^2 dt). After n same-detector clicks the branch
// amplitudes are raised to the n-th power (evaluated in log-magnitude space
// so large n cannot underflow). For N = 2 and balanced qubits this gives
//
//   P^n_d1 = (A1^2n + B1^2n + C1^2n + D1^2n) / 4
//   F^n_d1 = (A1^n + B1^n) / sqrt(2 (A1^2n + B1^2n + C1^2n + D1^2n))
//
// and the detector-2 analogue with C2, D2 in the numerator, with
// A:aa, B:bb, C:ab, D:ba. The magnitude-only fidelity above treats every
// branch pulse as the same shape; the phase-aware variant keeps the complex
// pairwise overlaps of the simulated branch pulses instead.

#pragma once

#include <array>
#include <span>
#include <vector>

#include "qrouter/params.hpp"
#include "qrouter/router_network.hpp"

namespace qrouter {

enum class Detector { D1, D2 };

// Per-detector branch data: one complex amplitude per combination plus the
// Gram matrix of the branch pulses, gram[i][j] = integral conj(f_i) f_j dt.
// The amplitude phase is referenced against the input pulse shape.
struct BranchSet {
    std::vector<complexd> amps;
    std::vector<std::vector<complexd>> gram;

    std::size_t combo_count() const { return amps.size(); }
    double magnitude(std::size_t combo) const { return std::abs(amps[combo]); }
};

struct DetectorCoefficients {
    std::size_t qubit_count = 0;
    std::array<BranchSet, 2> branch; // [0] -> D1, [1] -> D2
    std::vector<QubitInit> qubit_inits;

    const BranchSet& at(Detector d) const {
        return branch[d == Detector::D1 ? 0 : 1];
    }

    // Named accessors for the two-router case.
    double a1() const { return branch[0].magnitude(0); } // aa -> d1
    double b1() const { return branch[0].magnitude(3); } // bb -> d1
    double c1() const { return branch[0].magnitude(1); } // ab -> d1
    double d1() const { return branch[0].magnitude(2); } // ba -> d1
    double a2() const { return branch[1].magnitude(0); }
    double b2() const { return branch[1].magnitude(3); }
    double c2() const { return branch[1].magnitude(1); }
    double d2() const { return branch[1].magnitude(2); }
};

// Branch coefficients for any chain length.
DetectorCoefficients combo_coefficients(const ComboTable& table);

// Two-router case of the above; throws WrongArity when N != 2.
DetectorCoefficients detector_coefficients(const ComboTable& table);

// Normalized multi-qubit state, amplitudes over the {alpha,beta}^N basis
// with qubit 1 as the most significant bit.
class StateVector {
public:
    explicit StateVector(std::vector<complexd> amplitudes); // normalizes

    static StateVector bell_phi(double phase = 0.0); // (|aa> + e^{i p}|bb>)/sqrt2
    static StateVector bell_psi(double phase = 0.0); // (|ab> + e^{i p}|ba>)/sqrt2
    static StateVector ghz3(double phase = 0.0);     // (|bbb> + e^{i p}|aaa>)/sqrt2

    std::size_t dim() const { return amps_.size(); }
    std::size_t qubit_count() const { return n_qubits_; }
    const complexd& operator[](std::size_t i) const { return amps_[i]; }
    std::span<const complexd> amplitudes() const { return amps_; }

    double norm() const;
    double fidelity_to(const StateVector& target) const; // |<target|this>|

private:
    std::vector<complexd> amps_;
    std::size_t n_qubits_ = 0;
};

// Cumulative probability that n successive photons all click on the given
// detector. Throws Degenerate when every branch coefficient is zero.
double success_probability(const DetectorCoefficients& coeffs, Detector d, int n);

struct FidelityOptions {
    bool phase_aware = false;
};

// Fidelity of the n-click conditional state to the matching maximally
// entangled target ((|aa>+|bb>)/sqrt2 for D1, (|ab>+|ba>)/sqrt2 for D2).
// Two-router only.
double fidelity(const DetectorCoefficients& coeffs, Detector d, int n,
                const FidelityOptions& opts = {});

// The n-click conditional state with retained branch phases. qubit_phases
// overrides the initial-superposition phases when nonempty (size N).
StateVector conditional_state(const DetectorCoefficients& coeffs, Detector d,
                              int n, std::span<const double> qubit_phases = {});

// Bit flip on one qubit (0-based) followed by e^{i chi} on its |beta>
// component; an involution up to global phase. Maps the D2 Bell state onto
// the D1 one for chi = 0.
StateVector local_correction(const StateVector& state, std::size_t qubit,
                             double chi = 0.0);

// Three-qubit state from a two-router coefficient set plus an ideal third
// router appended to the chain:
//   D1: sum_c q_c [ z^d1_c |c,beta> + e^{i phi3} z^d2_c |c,alpha> ]
//   D2: same with d1/d2 swapped,
// normalized. For perfect input coefficients this reduces to
// (|R3>|Phi2> + e^{i phi3}|T3>|Psi2>)/sqrt2 and its D2 partner.
StateVector three_qubit_state(const DetectorCoefficients& coeffs_stage12,
                              double phi3, Detector d);

constexpr double kGhzHeraldThreshold = 0.75; // midway between the
// biseparable bound 1/2 and a perfect GHZ overlap

struct GhzResult {
    StateVector state;
    double fidelity = 0.0;     // against the nearest ideal GHZ
    bool below_threshold = false;
};

// Composes two heralded two-qubit links sharing qubit 1 — amplitudes
// a_{ij} b_{ik} |ijk>, normalized. Perfect links give the GHZ state.
// Throws WrongArity / SharedQubitMismatch.
GhzResult ghz_compose(const StateVector& link12, const StateVector& link13);

struct PurificationRow {
    int n = 0;
    double fidelity_d1 = 0.0;
    double fidelity_d2 = 0.0;
    double fidelity_d1_aware = 0.0;
    double fidelity_d2_aware = 0.0;
    double prob_d1 = 0.0;
    double prob_d2 = 0.0;
};

struct EntanglementReport {
    DetectorCoefficients coeffs;
    std::vector<PurificationRow> rows;         // n = 1 .. n_max
    std::vector<StateVector> states_d1;
    std::vector<StateVector> states_d2;
};

EntanglementReport purification_report(const DetectorCoefficients& coeffs,
                                       int n_max);

// Coupling strength that balances the d1 branch magnitudes (a1 == b1)
// for the two-router chain: bisection on g within [g_lo, g_hi] using the
// full pulsed pipeline. Throws ConfigInvalid when the bracket does not
// straddle a sign change.
double balance_coupling(const CqedParams& base, const TimeGrid& grid,
                        const PulseSpec& pulse, double g_lo = 1.0,
                        double g_hi = 10.0, double tol = 1e-3);

} // namespace qrouter
