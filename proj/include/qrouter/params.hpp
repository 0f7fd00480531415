// params.hpp — physical parameters of one atom-cavity router and of a
// router chain. Units: all rates and detunings are quoted in units of the
// total cavity field decay kappa (kappa_total = 1 is the usual convention,
// any positive scale works). hbar = 1 throughout.

#pragma once

#include <cstddef>
#include <vector>

namespace qrouter {

// One router: a two-sided Fabry-Perot cavity with mirror decay rates
// kappa1/kappa2, internal loss kappa_loss, and an atom whose coupled
// transition has strength g and dipole (amplitude) decay rate gamma.
// Note gamma multiplies the coherence directly in the equations of motion,
// so a population decay rate of kappa corresponds to gamma = kappa/2.
struct CqedParams {
    double g = 0.0;
    double kappa1 = 0.5;
    double kappa2 = 0.5;
    double kappa_loss = 0.0;
    double gamma = 0.0;
    double delta_a = 0.0; // drive detuning from the atomic transition
    double delta_c = 0.0; // drive detuning from the cavity resonance

    // Total field decay; always derived, never stored.
    double kappa_total() const { return kappa1 + kappa2 + kappa_loss; }
};

// Checks physicality and returns the validated parameter set.
// Throws NegativeRate / ZeroCavity.
CqedParams validate_params(const CqedParams& p);

// Atomic qubit basis. Alpha is the uncoupled ground state (the router
// transmits, role |T>), Beta couples to the cavity (reflects, role |R>).
enum class AtomBasis { Alpha, Beta };

inline char basis_char(AtomBasis b) { return b == AtomBasis::Alpha ? 'a' : 'b'; }

// Initial qubit superposition cos(theta)|alpha> + sin(theta) e^{i phi}|beta>.
struct QubitInit {
    double theta = 0.78539816339744830961566084581988; // pi/4
    double phi = 0.0;

    double alpha_amp() const;
    // Complex amplitude of |beta> is sin(theta) e^{i phi}; magnitude here.
    double beta_mag() const;
};

// An ordered chain of routers in the straight-through geometry:
// stage-k out1 feeds stage-(k+1) in1, stage-k out2 feeds stage-(k+1) in2,
// with the path phase arm_phases[k] applied on the out2 -> in2 link.
struct NetworkConfig {
    std::vector<CqedParams> routers;
    std::vector<QubitInit> qubit_inits; // defaults to theta=pi/4, phi=0 each
    std::vector<double> arm_phases;     // length N-1, defaults to zero

    std::size_t size() const { return routers.size(); }
};

// Fills defaulted lists, checks lengths and router physicality.
// Throws WrongArity / NegativeRate / ZeroCavity.
NetworkConfig validate_network(NetworkConfig net);

} // namespace qrouter
