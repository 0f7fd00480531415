// pulse_dynamics.hpp — time-domain scattering of a single-photon pulse off
// one router, in the one-excitation sector.
//
// Atom coupled (Beta):
//   dC/dt  = -i g Ce - kappa C - sum_j sqrt(2 kappa_j) f_in_j(t)
//   dCe/dt = -i g C  - gamma Ce
// Atom uncoupled (Alpha), empty cavity:
//   dC/dt  = -kappa C - sum_j sqrt(2 kappa_j) f_in_j(t)
// Outputs on both mirrors:
//   f_out_j(t) = f_in_j(t) + sqrt(2 kappa_j) C(t)
//
// C is the one-photon-in-cavity amplitude, Ce the excited-atom amplitude.
// Integration is fixed-step classical RK4 on the signal grid; inputs at
// half steps come from the attached analytic sampler when present, else
// from cubic interpolation. The solver is resonant-only: detuned pulsed
// scattering is rejected.

#pragma once

#include "qrouter/params.hpp"
#include "qrouter/signal.hpp"

namespace qrouter {

struct ScatterTrace {
    ComplexSignal c_cavity; // C(t)
    ComplexSignal c_atom;   // Ce(t); identically zero for Alpha
};

// Where the input photon probability went. Flux conservation:
//   input_norm = output_norm + cavity_loss + atomic_loss + residual.
struct LossBudget {
    double input_norm = 0.0;
    double output_norm = 0.0;
    double cavity_loss = 0.0; // 2 kappa_loss * integral |C|^2 dt
    double atomic_loss = 0.0; // 2 gamma * integral |Ce|^2 dt
    double residual = 0.0;    // population still inside at the grid end

    double closure() const {
        return input_norm - output_norm - cavity_loss - atomic_loss - residual;
    }
};

struct ScatterResult {
    ComplexSignal out1;
    ComplexSignal out2;
    ScatterTrace trace;
    LossBudget loss;
};

struct ScatterOptions {
    // Re-integrates at dt/2 and throws NonConverged when either output
    // norm shifts by more than convergence_tol.
    bool check_convergence = false;
    double convergence_tol = 1e-6;
};

// Normalized truncated Gaussian on [0, T], zero on the tail.
// Throws DegeneratePulse if width < 4 dt or (t0, width) leave [0, T].
ComplexSignal gaussian_pulse(const TimeGrid& grid, const PulseSpec& spec);

// Normalization constant C_N for the given grid and spec.
double gaussian_normalization(const TimeGrid& grid, const PulseSpec& spec);

ScatterResult scatter_router(const CqedParams& p, AtomBasis atom,
                             const ComplexSignal& in1, const ComplexSignal& in2,
                             const ScatterOptions& opts = {});

// |<s1_hat, s2_hat>| with both signals normalized first; in [0, 1] and
// insensitive to global phases. Throws ZeroSignal.
double signal_overlap(const ComplexSignal& s1, const ComplexSignal& s2);

} // namespace qrouter
