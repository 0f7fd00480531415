// signal.hpp — uniform time grids and complex pulse envelopes.
//
// A ComplexSignal samples a pulse envelope f(t) in units of 1/sqrt(time),
// so |f(t)|^2 is photon flux and integral |f|^2 dt is a probability.
// All integrals over sampled signals use one quadrature rule (composite
// Simpson), so norms computed anywhere in the library agree exactly.

#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "qrouter/error.hpp"

namespace qrouter {

using complexd = std::complex<double>;

// Uniform grid on [0, T + tail]. The pulse lives on [0, T]; the tail gives
// the cavity room to ring down so the flux budget closes.
struct TimeGrid {
    double pulse_length = 0.0; // T
    double tail = 0.0;
    double dt = 0.0;
    std::size_t n_samples = 0;

    double duration() const { return pulse_length + tail; }
    double time_at(std::size_t k) const { return static_cast<double>(k) * dt; }

    bool operator==(const TimeGrid&) const = default;
};

// Throws BadStep unless T > 0, 0 < dt < T, tail >= 0.
TimeGrid make_time_grid(double pulse_length, double dt, double tail);

// Gaussian pulse parameters: f(t) = C_N exp(-(t - t0)^2 / w^2) on [0, T].
// C_N is derived at sampling time so the gridded norm is exactly 1.
struct PulseSpec {
    double t0 = 0.0;   // center
    double width = 0.0; // w
};

class ComplexSignal {
public:
    using Sampler = std::function<complexd(double)>;

    ComplexSignal(TimeGrid grid, std::vector<complexd> samples);

    static ComplexSignal zeros(const TimeGrid& grid);

    const TimeGrid& grid() const { return grid_; }
    std::size_t size() const { return samples_.size(); }
    std::span<const complexd> samples() const { return samples_; }
    const complexd& operator[](std::size_t k) const { return samples_[k]; }

    // Evaluates the envelope at an arbitrary time: the exact analytic form
    // when one is attached, otherwise 4-point polynomial interpolation.
    complexd value_at(double t) const;

    // Attaches an exact evaluator (used for off-grid solver stages).
    ComplexSignal with_sampler(Sampler fn) const;
    bool has_sampler() const { return static_cast<bool>(sampler_); }

    ComplexSignal scaled(complexd factor) const;

    double norm_sq() const; // integral of |f|^2 dt

private:
    TimeGrid grid_;
    std::vector<complexd> samples_;
    std::shared_ptr<const Sampler> sampler_;
};

// Composite-Simpson integral of uniformly sampled values (Simpson 3/8 on
// the last three intervals when the interval count is odd; trapezoid for
// a single interval).
double integrate(std::span<const double> values, double dt);
complexd integrate(std::span<const complexd> values, double dt);

// integral conj(a(t)) b(t) dt. Throws GridMismatch.
complexd inner_product(const ComplexSignal& a, const ComplexSignal& b);

void require_same_grid(const ComplexSignal& a, const ComplexSignal& b);

} // namespace qrouter
