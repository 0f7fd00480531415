#include "qrouter/steady_state.hpp"

#include <cmath>

namespace qrouter {

CwResponse cw_response(const CqedParams& params, bool coupled, InputPort port) {
    const CqedParams p = validate_params(params);
    const double kappa = p.kappa_total();
    const double kappa_in = (port == InputPort::Port1) ? p.kappa1 : p.kappa2;
    const complexd i_unit{0.0, 1.0};
    const complexd cav = i_unit * p.delta_c + kappa;
    const double t_num = 2.0 * std::sqrt(p.kappa1 * p.kappa2);

    CwResponse resp;
    resp.input_port = port;
    if (!coupled || p.g == 0.0) {
        // Empty cavity; the atomic factor cancels.
        resp.r = 1.0 - 2.0 * kappa_in / cav;
        resp.t = -t_num / cav;
        return resp;
    }
    const complexd atom = i_unit * p.delta_a + p.gamma;
    const complexd denom = cav * atom + p.g * p.g;
    resp.r = 1.0 - 2.0 * kappa_in * atom / denom;
    resp.t = -t_num * atom / denom;
    return resp;
}

std::vector<SpectrumRow> spectrum(const CqedParams& p,
                                  const std::vector<double>& detunings) {
    validate_params(p);
    std::vector<SpectrumRow> rows;
    rows.reserve(detunings.size());
    for (double delta : detunings) {
        CqedParams scanned = p;
        scanned.delta_a = delta;
        scanned.delta_c = delta;
        const CwResponse empty = cw_response(scanned, false);
        const CwResponse coupled = cw_response(scanned, true);
        rows.push_back({delta, std::norm(empty.r), std::norm(empty.t),
                        std::norm(coupled.r), std::norm(coupled.t)});
    }
    return rows;
}

std::vector<double> default_detuning_scan(double lo, double hi, int points) {
    std::vector<double> scan;
    scan.reserve(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) {
        scan.push_back(lo + (hi - lo) * static_cast<double>(k) /
                                static_cast<double>(points - 1));
    }
    return scan;
}

} // namespace qrouter
