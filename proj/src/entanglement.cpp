#include "qrouter/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qrouter {

namespace {

constexpr double kRoot2Inv = 0.70710678118654752440;

complexd phase_of(complexd z) {
    const double m = std::abs(z);
    if (m <= 0.0) {
        return {1.0, 0.0};
    }
    return z / m;
}

complexd pow_int(complexd z, int n) {
    complexd acc{1.0, 0.0};
    for (int k = 0; k < n; ++k) {
        acc *= z;
    }
    return acc;
}

// Initial-superposition amplitude of one basis combination.
complexd combo_prior(const std::vector<QubitInit>& inits, std::size_t combo_idx,
                     std::span<const double> phi_override) {
    const std::size_t n = inits.size();
    complexd q{1.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) {
        const bool beta = ((combo_idx >> (n - 1 - k)) & 1u) != 0;
        if (beta) {
            const double phi =
                phi_override.empty() ? inits[k].phi : phi_override[k];
            q *= std::polar(inits[k].beta_mag(), phi);
        } else {
            q *= inits[k].alpha_amp();
        }
    }
    return q;
}

BranchSet build_branch(const ComboTable& table, Detector d) {
    const std::size_t count = table.entries.size();
    BranchSet branch;
    branch.amps.resize(count);
    branch.gram.assign(count, std::vector<complexd>(count, complexd{0.0, 0.0}));
    for (std::size_t i = 0; i < count; ++i) {
        const ComplexSignal& fi =
            (d == Detector::D1) ? table.entries[i].d1 : table.entries[i].d2;
        for (std::size_t j = i; j < count; ++j) {
            const ComplexSignal& fj =
                (d == Detector::D1) ? table.entries[j].d1 : table.entries[j].d2;
            const complexd g = inner_product(fi, fj);
            branch.gram[i][j] = g;
            branch.gram[j][i] = std::conj(g);
        }
        const double mag = std::sqrt(std::max(0.0, branch.gram[i][i].real()));
        // Branch phase referenced against the input pulse shape.
        complexd ref = inner_product(table.input, fi);
        if (std::abs(ref) < 1e-14 * (1.0 + mag)) {
            // Orthogonal to the input: take the phase at the pulse peak.
            std::size_t peak = 0;
            double best = -1.0;
            for (std::size_t k = 0; k < fi.size(); ++k) {
                if (std::abs(fi[k]) > best) {
                    best = std::abs(fi[k]);
                    peak = k;
                }
            }
            ref = fi[peak];
        }
        branch.amps[i] = mag * phase_of(ref);
    }
    return branch;
}

const BranchSet& branch_for(const DetectorCoefficients& c, Detector d) {
    return c.at(d);
}

void require_two_qubits(const DetectorCoefficients& c, const char* what) {
    if (c.qubit_count != 2) {
        throw Error(ErrorCode::WrongArity,
                    std::string(what) + " needs a two-router coefficient set");
    }
}

// Target Bell amplitudes over the combo index for the given detector:
// D1 pairs aa with bb, D2 pairs ab with ba.
std::vector<complexd> bell_target(Detector d) {
    std::vector<complexd> v(4, complexd{0.0, 0.0});
    if (d == Detector::D1) {
        v[0] = kRoot2Inv;
        v[3] = kRoot2Inv;
    } else {
        v[1] = kRoot2Inv;
        v[2] = kRoot2Inv;
    }
    return v;
}

} // namespace

DetectorCoefficients combo_coefficients(const ComboTable& table) {
    DetectorCoefficients coeffs;
    coeffs.qubit_count = table.router_count();
    coeffs.branch[0] = build_branch(table, Detector::D1);
    coeffs.branch[1] = build_branch(table, Detector::D2);
    coeffs.qubit_inits = table.network.qubit_inits;
    return coeffs;
}

DetectorCoefficients detector_coefficients(const ComboTable& table) {
    if (table.router_count() != 2) {
        throw Error(ErrorCode::WrongArity,
                    "detector_coefficients needs N = 2, got N = " +
                        std::to_string(table.router_count()));
    }
    return combo_coefficients(table);
}

StateVector::StateVector(std::vector<complexd> amplitudes)
    : amps_(std::move(amplitudes)) {
    const std::size_t d = amps_.size();
    if (d < 2 || (d & (d - 1)) != 0) {
        throw Error(ErrorCode::WrongArity,
                    "state dimension must be a power of two, got " +
                        std::to_string(d));
    }
    n_qubits_ = 0;
    for (std::size_t v = d; v > 1; v >>= 1) {
        ++n_qubits_;
    }
    double n2 = 0.0;
    for (const complexd& a : amps_) {
        n2 += std::norm(a);
    }
    if (!(n2 > 1e-300)) {
        throw Error(ErrorCode::Degenerate, "cannot normalize a zero state");
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (complexd& a : amps_) {
        a *= inv;
    }
}

StateVector StateVector::bell_phi(double phase) {
    return StateVector({kRoot2Inv, 0.0, 0.0, kRoot2Inv * std::polar(1.0, phase)});
}

StateVector StateVector::bell_psi(double phase) {
    return StateVector({0.0, kRoot2Inv, kRoot2Inv * std::polar(1.0, phase), 0.0});
}

StateVector StateVector::ghz3(double phase) {
    std::vector<complexd> amps(8, complexd{0.0, 0.0});
    amps[0] = kRoot2Inv * std::polar(1.0, phase); // |aaa> = |TTT>
    amps[7] = kRoot2Inv;                          // |bbb> = |RRR>
    return StateVector(std::move(amps));
}

double StateVector::norm() const {
    double n2 = 0.0;
    for (const complexd& a : amps_) {
        n2 += std::norm(a);
    }
    return std::sqrt(n2);
}

double StateVector::fidelity_to(const StateVector& target) const {
    if (target.dim() != dim()) {
        throw Error(ErrorCode::WrongArity, "state dimensions differ");
    }
    complexd overlap{0.0, 0.0};
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        overlap += std::conj(target.amps_[i]) * amps_[i];
    }
    return std::min(std::abs(overlap), 1.0);
}

double success_probability(const DetectorCoefficients& coeffs, Detector d, int n) {
    const BranchSet& branch = branch_for(coeffs, d);
    const std::size_t count = branch.combo_count();
    double mmax = 0.0;
    for (std::size_t c = 0; c < count; ++c) {
        mmax = std::max(mmax, branch.magnitude(c));
    }
    if (mmax <= 0.0) {
        return 0.0;
    }
    double scaled_sum = 0.0;
    for (std::size_t c = 0; c < count; ++c) {
        const double q2 = std::norm(combo_prior(coeffs.qubit_inits, c, {}));
        const double ratio = branch.magnitude(c) / mmax;
        scaled_sum += q2 * std::exp(2.0 * n * std::log(ratio > 0.0 ? ratio : 1e-320));
    }
    // P = mmax^(2n) * scaled_sum, assembled in log space.
    const double log_p = 2.0 * n * std::log(mmax) + std::log(scaled_sum);
    if (log_p < -700.0) {
        return 0.0;
    }
    return std::exp(log_p);
}

double fidelity(const DetectorCoefficients& coeffs, Detector d, int n,
                const FidelityOptions& opts) {
    require_two_qubits(coeffs, "fidelity");
    const BranchSet& branch = branch_for(coeffs, d);
    double mmax = 0.0;
    for (std::size_t c = 0; c < 4; ++c) {
        mmax = std::max(mmax, branch.magnitude(c));
    }
    if (mmax <= 0.0) {
        throw Error(ErrorCode::Degenerate, "all branch coefficients are zero");
    }
    const std::vector<complexd> target = bell_target(d);

    if (!opts.phase_aware) {
        // Treats every branch pulse as the same shape: only the magnitudes
        // A_c^n enter.
        double numer = 0.0;
        double denom = 0.0;
        for (std::size_t c = 0; c < 4; ++c) {
            const complexd q = combo_prior(coeffs.qubit_inits, c, {});
            const double w = std::pow(branch.magnitude(c) / mmax, n);
            numer += std::abs(target[c]) * std::abs(q) * w;
            denom += std::norm(q) * w * w;
        }
        if (denom <= 0.0) {
            return 0.0;
        }
        return std::min(numer / std::sqrt(denom), 1.0);
    }

    // Exact conditional-state fidelity with the simulated branch pulses:
    // clicks at unresolved times mix the branches through their pairwise
    // overlaps raised to the n-th power.
    const double scale = mmax * mmax;
    double numer = 0.0;
    double denom = 0.0;
    for (std::size_t c = 0; c < 4; ++c) {
        const complexd qc = combo_prior(coeffs.qubit_inits, c, {});
        denom += std::norm(qc) *
                 std::pow(branch.gram[c][c].real() / scale, n);
        for (std::size_t cp = 0; cp < 4; ++cp) {
            const complexd qcp = combo_prior(coeffs.qubit_inits, cp, {});
            const complexd term = std::conj(target[c]) * qc * target[cp] *
                                  std::conj(qcp) *
                                  pow_int(branch.gram[cp][c] / scale, n);
            numer += term.real();
        }
    }
    if (denom <= 0.0) {
        return 0.0;
    }
    numer = std::max(numer, 0.0);
    return std::min(std::sqrt(numer / denom), 1.0);
}

StateVector conditional_state(const DetectorCoefficients& coeffs, Detector d,
                              int n, std::span<const double> qubit_phases) {
    const BranchSet& branch = branch_for(coeffs, d);
    const std::size_t count = branch.combo_count();
    if (!qubit_phases.empty() && qubit_phases.size() != coeffs.qubit_count) {
        throw Error(ErrorCode::WrongArity, "qubit_phases length must match qubit count");
    }
    double mmax = 0.0;
    for (std::size_t c = 0; c < count; ++c) {
        mmax = std::max(mmax, branch.magnitude(c));
    }
    if (mmax <= 0.0) {
        throw Error(ErrorCode::Degenerate, "all branch coefficients are zero");
    }
    std::vector<complexd> amps(count, complexd{0.0, 0.0});
    for (std::size_t c = 0; c < count; ++c) {
        const double mag = branch.magnitude(c);
        if (mag <= 0.0) {
            continue;
        }
        // A_c^n in log-magnitude space, relative to the largest branch.
        const double w = std::exp(n * (std::log(mag) - std::log(mmax)));
        amps[c] = combo_prior(coeffs.qubit_inits, c, qubit_phases) *
                  pow_int(phase_of(branch.amps[c]), n) * w;
    }
    return StateVector(std::move(amps));
}

StateVector local_correction(const StateVector& state, std::size_t qubit,
                             double chi) {
    const std::size_t n = state.qubit_count();
    if (qubit >= n) {
        throw Error(ErrorCode::WrongArity, "qubit index out of range");
    }
    const std::size_t mask = std::size_t{1} << (n - 1 - qubit);
    std::vector<complexd> amps(state.dim());
    const complexd phase = std::polar(1.0, chi);
    for (std::size_t i = 0; i < state.dim(); ++i) {
        const complexd src = state[i ^ mask];
        amps[i] = ((i & mask) != 0) ? phase * src : src;
    }
    return StateVector(std::move(amps));
}

StateVector three_qubit_state(const DetectorCoefficients& coeffs_stage12,
                              double phi3, Detector d) {
    require_two_qubits(coeffs_stage12, "three_qubit_state");
    const BranchSet& reflectwise = coeffs_stage12.at(d);
    const BranchSet& transmitwise =
        coeffs_stage12.at(d == Detector::D1 ? Detector::D2 : Detector::D1);
    const complexd ph3 = std::polar(1.0, phi3);
    std::vector<complexd> amps(8, complexd{0.0, 0.0});
    for (std::size_t c = 0; c < 4; ++c) {
        const complexd q = combo_prior(coeffs_stage12.qubit_inits, c, {});
        // Third router reflecting (beta) keeps the photon on its arm;
        // transmitting (alpha) swaps the arms onto this detector.
        amps[c * 2 + 1] = q * reflectwise.amps[c] * kRoot2Inv;
        amps[c * 2 + 0] = q * ph3 * transmitwise.amps[c] * kRoot2Inv;
    }
    return StateVector(std::move(amps));
}

GhzResult ghz_compose(const StateVector& link12, const StateVector& link13) {
    if (link12.qubit_count() != 2 || link13.qubit_count() != 2) {
        throw Error(ErrorCode::WrongArity, "ghz_compose takes two two-qubit links");
    }
    std::vector<complexd> amps(8, complexd{0.0, 0.0});
    double n2 = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            for (std::size_t k = 0; k < 2; ++k) {
                const complexd a = link12[i * 2 + j] * link13[i * 2 + k];
                amps[(i << 2) | (j << 1) | k] = a;
                n2 += std::norm(a);
            }
        }
    }
    if (n2 <= 1e-24) {
        throw Error(ErrorCode::SharedQubitMismatch,
                    "links have no common support on the shared qubit");
    }
    GhzResult result{StateVector(std::move(amps)), 0.0, false};
    // Fidelity to the nearest ideal GHZ (optimal over its relative phase).
    result.fidelity =
        (std::abs(result.state[0]) + std::abs(result.state[7])) * kRoot2Inv;
    result.below_threshold = result.fidelity < kGhzHeraldThreshold;
    return result;
}

EntanglementReport purification_report(const DetectorCoefficients& coeffs,
                                       int n_max) {
    EntanglementReport report;
    report.coeffs = coeffs;
    for (int n = 1; n <= n_max; ++n) {
        PurificationRow row;
        row.n = n;
        row.fidelity_d1 = fidelity(coeffs, Detector::D1, n);
        row.fidelity_d2 = fidelity(coeffs, Detector::D2, n);
        row.fidelity_d1_aware =
            fidelity(coeffs, Detector::D1, n, {.phase_aware = true});
        row.fidelity_d2_aware =
            fidelity(coeffs, Detector::D2, n, {.phase_aware = true});
        row.prob_d1 = success_probability(coeffs, Detector::D1, n);
        row.prob_d2 = success_probability(coeffs, Detector::D2, n);
        report.rows.push_back(row);
        report.states_d1.push_back(conditional_state(coeffs, Detector::D1, n));
        report.states_d2.push_back(conditional_state(coeffs, Detector::D2, n));
    }
    return report;
}

double balance_coupling(const CqedParams& base, const TimeGrid& grid,
                        const PulseSpec& pulse, double g_lo, double g_hi,
                        double tol) {
    const ComplexSignal input = gaussian_pulse(grid, pulse);
    auto gap = [&](double g) {
        CqedParams p = base;
        p.g = g;
        const ComplexSignal zero = ComplexSignal::zeros(grid);
        const auto aa = scatter_router(p, AtomBasis::Alpha, input, zero);
        const auto aa2 = scatter_router(p, AtomBasis::Alpha, aa.out1, aa.out2);
        const auto bb = scatter_router(p, AtomBasis::Beta, input, zero);
        const auto bb2 = scatter_router(p, AtomBasis::Beta, bb.out1, bb.out2);
        const double a1 = std::sqrt(aa2.out1.norm_sq());
        const double b1 = std::sqrt(bb2.out1.norm_sq());
        return a1 - b1;
    };
    double flo = gap(g_lo);
    double fhi = gap(g_hi);
    if (flo == 0.0) return g_lo;
    if (fhi == 0.0) return g_hi;
    if ((flo > 0.0) == (fhi > 0.0)) {
        throw Error(ErrorCode::ConfigInvalid,
                    "a1 - b1 does not change sign on [" + std::to_string(g_lo) +
                        ", " + std::to_string(g_hi) + "]");
    }
    while (g_hi - g_lo > tol) {
        const double mid = 0.5 * (g_lo + g_hi);
        const double fmid = gap(mid);
        if (fmid == 0.0) {
            return mid;
        }
        if ((fmid > 0.0) == (flo > 0.0)) {
            g_lo = mid;
            flo = fmid;
        } else {
            g_hi = mid;
        }
    }
    return 0.5 * (g_lo + g_hi);
}

} // namespace qrouter
