#include "qrouter/signal.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace qrouter {

TimeGrid make_time_grid(double pulse_length, double dt, double tail) {
    if (!(pulse_length > 0.0)) {
        throw Error(ErrorCode::BadStep, "pulse length must be > 0");
    }
    if (!(dt > 0.0)) {
        throw Error(ErrorCode::BadStep, "dt must be > 0");
    }
    if (dt >= pulse_length) {
        throw Error(ErrorCode::BadStep, "dt = " + std::to_string(dt) +
                                            " does not resolve T = " +
                                            std::to_string(pulse_length));
    }
    if (tail < 0.0) {
        throw Error(ErrorCode::BadStep, "tail must be >= 0");
    }
    TimeGrid grid;
    grid.pulse_length = pulse_length;
    grid.tail = tail;
    grid.dt = dt;
    grid.n_samples = static_cast<std::size_t>(
                         std::llround((pulse_length + tail) / dt)) + 1;
    return grid;
}

ComplexSignal::ComplexSignal(TimeGrid grid, std::vector<complexd> samples)
    : grid_(grid), samples_(std::move(samples)) {
    if (samples_.size() != grid_.n_samples) {
        throw Error(ErrorCode::GridMismatch,
                    "sample count " + std::to_string(samples_.size()) +
                        " does not match grid (" + std::to_string(grid_.n_samples) + ")");
    }
}

ComplexSignal ComplexSignal::zeros(const TimeGrid& grid) {
    return ComplexSignal(grid, std::vector<complexd>(grid.n_samples, complexd{0.0, 0.0}));
}

ComplexSignal ComplexSignal::with_sampler(Sampler fn) const {
    ComplexSignal out(grid_, samples_);
    out.sampler_ = std::make_shared<const Sampler>(std::move(fn));
    return out;
}

ComplexSignal ComplexSignal::scaled(complexd factor) const {
    std::vector<complexd> scaled_samples(samples_.size());
    for (std::size_t k = 0; k < samples_.size(); ++k) {
        scaled_samples[k] = factor * samples_[k];
    }
    ComplexSignal out(grid_, std::move(scaled_samples));
    if (sampler_) {
        auto base = sampler_;
        out.sampler_ = std::make_shared<const Sampler>(
            [base, factor](double t) { return factor * (*base)(t); });
    }
    return out;
}

complexd ComplexSignal::value_at(double t) const {
    if (sampler_) {
        return (*sampler_)(t);
    }
    const std::size_t n = samples_.size();
    if (n == 1) {
        return samples_[0];
    }
    const double x = t / grid_.dt;
    // 4-point Lagrange stencil, shifted at the edges.
    auto i1 = static_cast<std::ptrdiff_t>(std::floor(x));
    std::ptrdiff_t i0 = i1 - 1;
    if (i0 < 0) i0 = 0;
    if (i0 > static_cast<std::ptrdiff_t>(n) - 4) i0 = static_cast<std::ptrdiff_t>(n) - 4;
    if (i0 < 0) { // fewer than 4 samples: fall back to linear
        const std::size_t a = std::min<std::size_t>(static_cast<std::size_t>(std::max<std::ptrdiff_t>(i1, 0)), n - 2);
        const double u = x - static_cast<double>(a);
        return samples_[a] * (1.0 - u) + samples_[a + 1] * u;
    }
    const double u = x - static_cast<double>(i0);
    // Lagrange basis at nodes 0,1,2,3
    const double um1 = u - 1.0, um2 = u - 2.0, um3 = u - 3.0;
    const double w0 = -um1 * um2 * um3 / 6.0;
    const double w1 = u * um2 * um3 / 2.0;
    const double w2 = -u * um1 * um3 / 2.0;
    const double w3 = u * um1 * um2 / 6.0;
    const auto idx = static_cast<std::size_t>(i0);
    return w0 * samples_[idx] + w1 * samples_[idx + 1] + w2 * samples_[idx + 2] +
           w3 * samples_[idx + 3];
}

namespace {

// Composite Simpson weights; 3/8 rule closes an odd interval count.
template <typename T>
T simpson_sum(std::span<const T> v, double dt) {
    const std::size_t n = v.size();
    if (n < 2) {
        return T{};
    }
    if (n == 2) {
        return (v[0] + v[1]) * (dt / 2.0);
    }
    const std::size_t intervals = n - 1;
    std::size_t simpson_end = intervals; // exclusive node index of the 1/3-rule part
    T tail_sum{};
    if (intervals % 2 != 0) {
        // Simpson 3/8 on the last three intervals.
        simpson_end = intervals - 3;
        tail_sum = (v[n - 4] + 3.0 * v[n - 3] + 3.0 * v[n - 2] + v[n - 1]) * (3.0 * dt / 8.0);
        if (simpson_end == 0) {
            return tail_sum;
        }
    }
    T acc = v[0] + v[simpson_end];
    for (std::size_t k = 1; k < simpson_end; k += 2) {
        acc += 4.0 * v[k];
    }
    for (std::size_t k = 2; k < simpson_end; k += 2) {
        acc += 2.0 * v[k];
    }
    return acc * (dt / 3.0) + tail_sum;
}

} // namespace

double integrate(std::span<const double> values, double dt) {
    return simpson_sum(values, dt);
}

complexd integrate(std::span<const complexd> values, double dt) {
    return simpson_sum(values, dt);
}

void require_same_grid(const ComplexSignal& a, const ComplexSignal& b) {
    if (!(a.grid() == b.grid())) {
        throw Error(ErrorCode::GridMismatch, "signals live on different time grids");
    }
}

complexd inner_product(const ComplexSignal& a, const ComplexSignal& b) {
    require_same_grid(a, b);
    std::vector<complexd> prod(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        prod[k] = std::conj(a[k]) * b[k];
    }
    return integrate(std::span<const complexd>(prod), a.grid().dt);
}

double ComplexSignal::norm_sq() const {
    std::vector<double> mag2(samples_.size());
    for (std::size_t k = 0; k < samples_.size(); ++k) {
        mag2[k] = std::norm(samples_[k]);
    }
    return integrate(std::span<const double>(mag2), grid_.dt);
}

} // namespace qrouter
