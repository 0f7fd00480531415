#include "qrouter/pulse_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace qrouter {

double gaussian_normalization(const TimeGrid& grid, const PulseSpec& spec) {
    std::vector<double> mag2(grid.n_samples, 0.0);
    for (std::size_t k = 0; k < grid.n_samples; ++k) {
        const double t = grid.time_at(k);
        if (t <= grid.pulse_length) {
            const double arg = (t - spec.t0) / spec.width;
            mag2[k] = std::exp(-2.0 * arg * arg);
        }
    }
    const double raw = integrate(std::span<const double>(mag2), grid.dt);
    return 1.0 / std::sqrt(raw);
}

ComplexSignal gaussian_pulse(const TimeGrid& grid, const PulseSpec& spec) {
    if (!(spec.width > 0.0) || spec.t0 < 0.0 || spec.t0 > grid.pulse_length) {
        throw Error(ErrorCode::DegeneratePulse,
                    "pulse spec outside [0, T] or non-positive width");
    }
    if (spec.width < 4.0 * grid.dt) {
        throw Error(ErrorCode::DegeneratePulse,
                    "width " + std::to_string(spec.width) +
                        " unresolvable at dt = " + std::to_string(grid.dt));
    }
    const double c_n = gaussian_normalization(grid, spec);
    std::vector<complexd> samples(grid.n_samples, complexd{0.0, 0.0});
    for (std::size_t k = 0; k < grid.n_samples; ++k) {
        const double t = grid.time_at(k);
        if (t <= grid.pulse_length) {
            const double arg = (t - spec.t0) / spec.width;
            samples[k] = complexd{c_n * std::exp(-arg * arg), 0.0};
        }
    }
    ComplexSignal signal(grid, std::move(samples));
    const double T = grid.pulse_length;
    const double t0 = spec.t0;
    const double w = spec.width;
    return signal.with_sampler([c_n, T, t0, w](double t) -> complexd {
        if (t < 0.0 || t > T) {
            return {0.0, 0.0};
        }
        const double arg = (t - t0) / w;
        return {c_n * std::exp(-arg * arg), 0.0};
    });
}

namespace {

struct OdeSolution {
    std::vector<complexd> cavity; // at grid nodes
    std::vector<complexd> atom;   // empty for Alpha
};

// Classical RK4 over the grid. drive_nodes has n entries, drive_half n-1
// (sampled at t_k + dt/2).
OdeSolution integrate_router(const CqedParams& p, AtomBasis atom, double dt,
                             const std::vector<complexd>& drive_nodes,
                             const std::vector<complexd>& drive_half) {
    const std::size_t n = drive_nodes.size();
    const double kappa = p.kappa_total();
    OdeSolution sol;
    sol.cavity.assign(n, complexd{0.0, 0.0});

    if (atom == AtomBasis::Alpha) {
        complexd c{0.0, 0.0};
        for (std::size_t k = 0; k + 1 < n; ++k) {
            const complexd d0 = drive_nodes[k];
            const complexd dh = drive_half[k];
            const complexd d1 = drive_nodes[k + 1];
            const complexd k1 = -kappa * c - d0;
            const complexd k2 = -kappa * (c + 0.5 * dt * k1) - dh;
            const complexd k3 = -kappa * (c + 0.5 * dt * k2) - dh;
            const complexd k4 = -kappa * (c + dt * k3) - d1;
            c += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            sol.cavity[k + 1] = c;
        }
        return sol;
    }

    sol.atom.assign(n, complexd{0.0, 0.0});
    const complexd ig{0.0, p.g};
    complexd c{0.0, 0.0};
    complexd e{0.0, 0.0};
    auto fc = [&](complexd cc, complexd ee, complexd d) { return -ig * ee - kappa * cc - d; };
    auto fe = [&](complexd cc, complexd ee) { return -ig * cc - p.gamma * ee; };
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const complexd d0 = drive_nodes[k];
        const complexd dh = drive_half[k];
        const complexd d1 = drive_nodes[k + 1];
        const complexd k1c = fc(c, e, d0);
        const complexd k1e = fe(c, e);
        const complexd k2c = fc(c + 0.5 * dt * k1c, e + 0.5 * dt * k1e, dh);
        const complexd k2e = fe(c + 0.5 * dt * k1c, e + 0.5 * dt * k1e);
        const complexd k3c = fc(c + 0.5 * dt * k2c, e + 0.5 * dt * k2e, dh);
        const complexd k3e = fe(c + 0.5 * dt * k2c, e + 0.5 * dt * k2e);
        const complexd k4c = fc(c + dt * k3c, e + dt * k3e, d1);
        const complexd k4e = fe(c + dt * k3c, e + dt * k3e);
        c += (dt / 6.0) * (k1c + 2.0 * k2c + 2.0 * k3c + k4c);
        e += (dt / 6.0) * (k1e + 2.0 * k2e + 2.0 * k3e + k4e);
        sol.cavity[k + 1] = c;
        sol.atom[k + 1] = e;
    }
    return sol;
}

double norm_sq_of(const std::vector<complexd>& v, double dt) {
    std::vector<double> mag2(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        mag2[k] = std::norm(v[k]);
    }
    return integrate(std::span<const double>(mag2), dt);
}

std::vector<complexd> output_samples(const ComplexSignal& in, double root_rate,
                                     const std::vector<complexd>& cavity) {
    std::vector<complexd> out(cavity.size());
    for (std::size_t k = 0; k < cavity.size(); ++k) {
        out[k] = in[k] + root_rate * cavity[k];
    }
    return out;
}

} // namespace

ScatterResult scatter_router(const CqedParams& params, AtomBasis atom,
                             const ComplexSignal& in1, const ComplexSignal& in2,
                             const ScatterOptions& opts) {
    const CqedParams p = validate_params(params);
    if (p.delta_a != 0.0 || p.delta_c != 0.0) {
        throw Error(ErrorCode::NonResonant,
                    "pulsed scattering is implemented on resonance only");
    }
    require_same_grid(in1, in2);
    const TimeGrid grid = in1.grid();
    const std::size_t n = grid.n_samples;
    const double dt = grid.dt;
    const double root1 = std::sqrt(2.0 * p.kappa1);
    const double root2 = std::sqrt(2.0 * p.kappa2);

    std::vector<complexd> drive_nodes(n);
    for (std::size_t k = 0; k < n; ++k) {
        drive_nodes[k] = root1 * in1[k] + root2 * in2[k];
    }
    std::vector<complexd> drive_half(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double th = grid.time_at(k) + 0.5 * dt;
        drive_half[k] = root1 * in1.value_at(th) + root2 * in2.value_at(th);
    }

    const OdeSolution sol = integrate_router(p, atom, dt, drive_nodes, drive_half);

    std::vector<complexd> out1 = output_samples(in1, root1, sol.cavity);
    std::vector<complexd> out2 = output_samples(in2, root2, sol.cavity);

    LossBudget loss;
    loss.input_norm = in1.norm_sq() + in2.norm_sq();
    loss.output_norm = norm_sq_of(out1, dt) + norm_sq_of(out2, dt);
    loss.cavity_loss = 2.0 * p.kappa_loss * norm_sq_of(sol.cavity, dt);
    loss.atomic_loss =
        sol.atom.empty() ? 0.0 : 2.0 * p.gamma * norm_sq_of(sol.atom, dt);
    loss.residual = std::norm(sol.cavity.back()) +
                    (sol.atom.empty() ? 0.0 : std::norm(sol.atom.back()));

    if (opts.check_convergence) {
        // Same scattering on a dt/2 grid; the output norms must not move.
        const std::size_t nr = 2 * n - 1;
        const double dtr = dt / 2.0;
        std::vector<complexd> in1_fine(nr), in2_fine(nr);
        for (std::size_t k = 0; k < n; ++k) {
            in1_fine[2 * k] = in1[k];
            in2_fine[2 * k] = in2[k];
        }
        for (std::size_t k = 0; k + 1 < n; ++k) {
            const double th = grid.time_at(k) + 0.5 * dt;
            in1_fine[2 * k + 1] = in1.value_at(th);
            in2_fine[2 * k + 1] = in2.value_at(th);
        }
        std::vector<complexd> dn(nr), dh(nr - 1);
        for (std::size_t k = 0; k < nr; ++k) {
            dn[k] = root1 * in1_fine[k] + root2 * in2_fine[k];
        }
        for (std::size_t k = 0; k + 1 < nr; ++k) {
            const double tq = (static_cast<double>(k) + 0.5) * dtr;
            dh[k] = root1 * in1.value_at(tq) + root2 * in2.value_at(tq);
        }
        const OdeSolution fine = integrate_router(p, atom, dtr, dn, dh);
        std::vector<complexd> out1_fine(nr), out2_fine(nr);
        for (std::size_t k = 0; k < nr; ++k) {
            out1_fine[k] = in1_fine[k] + root1 * fine.cavity[k];
            out2_fine[k] = in2_fine[k] + root2 * fine.cavity[k];
        }
        const double shift1 = std::abs(norm_sq_of(out1_fine, dtr) - norm_sq_of(out1, dt));
        const double shift2 = std::abs(norm_sq_of(out2_fine, dtr) - norm_sq_of(out2, dt));
        if (shift1 > opts.convergence_tol || shift2 > opts.convergence_tol) {
            throw Error(ErrorCode::NonConverged,
                        "output norm shifted by " +
                            std::to_string(std::max(shift1, shift2)) +
                            " under dt halving");
        }
    }

    ScatterResult result{
        ComplexSignal(grid, std::move(out1)),
        ComplexSignal(grid, std::move(out2)),
        ScatterTrace{
            ComplexSignal(grid, std::move(sol.cavity)),
            sol.atom.empty() ? ComplexSignal::zeros(grid)
                             : ComplexSignal(grid, std::move(sol.atom)),
        },
        loss,
    };
    return result;
}

double signal_overlap(const ComplexSignal& s1, const ComplexSignal& s2) {
    require_same_grid(s1, s2);
    const double n1 = s1.norm_sq();
    const double n2 = s2.norm_sq();
    if (n1 <= 1e-30 || n2 <= 1e-30) {
        throw Error(ErrorCode::ZeroSignal, "overlap of a zero-norm signal");
    }
    const double overlap = std::abs(inner_product(s1, s2)) / std::sqrt(n1 * n2);
    return std::min(overlap, 1.0);
}

} // namespace qrouter
