// steady_state.hpp — closed-form continuous-wave response of one router.
//
// For a monochromatic drive at detunings (delta_a, delta_c) the intracavity
// steady state gives
//
//   r = 1 - 2 kappa_in (i delta_a + gamma) / D
//   t =   - 2 sqrt(kappa1 kappa2) (i delta_a + gamma) / D
//   D = (i delta_c + kappa)(i delta_a + gamma) + g^2
//
// with kappa_in the mirror rate of the driven port. The transmitted field
// carries a pi phase relative to the input (the sign of t above); power
// spectra are unaffected. With g = 0 the atomic factor cancels and the
// empty-cavity limit r = 1 - 2 kappa_in/(i delta_c + kappa) is used directly.

#pragma once

#include <vector>

#include "qrouter/params.hpp"
#include "qrouter/signal.hpp"

namespace qrouter {

enum class InputPort { Port1, Port2 };

struct CwResponse {
    complexd r; // reflection amplitude, back out of the driven port
    complexd t; // transmission amplitude to the opposite port
    InputPort input_port = InputPort::Port1;
};

// coupled = false evaluates the empty cavity (g treated as 0).
CwResponse cw_response(const CqedParams& p, bool coupled,
                       InputPort port = InputPort::Port1);

struct SpectrumRow {
    double delta;      // common detuning, delta_a = delta_c = delta
    double r2_empty;   // power reflection, atom uncoupled
    double t2_empty;
    double r2_coupled; // power reflection, atom coupled
    double t2_coupled;
};

// Power spectra on a single-axis scan delta_a = delta_c = delta.
// Detunings in p are ignored; the scan supplies them.
std::vector<SpectrumRow> spectrum(const CqedParams& p,
                                  const std::vector<double>& detunings);

// Default scan: covers both vacuum-Rabi peaks at g = 10 kappa with
// >= 40 points per linewidth.
std::vector<double> default_detuning_scan(double lo = -15.0, double hi = 15.0,
                                          int points = 1201);

} // namespace qrouter
