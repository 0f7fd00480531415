#include "qrouter/params.hpp"

#include <cmath>
#include <string>

#include "qrouter/error.hpp"

namespace qrouter {

CqedParams validate_params(const CqedParams& p) {
    auto reject_negative = [](double v, const char* name) {
        if (v < 0.0 || std::isnan(v)) {
            throw Error(ErrorCode::NegativeRate,
                        std::string(name) + " = " + std::to_string(v));
        }
    };
    reject_negative(p.g, "g");
    reject_negative(p.kappa1, "kappa1");
    reject_negative(p.kappa2, "kappa2");
    reject_negative(p.kappa_loss, "kappa_loss");
    reject_negative(p.gamma, "gamma");
    if (!(p.kappa_total() > 0.0)) {
        throw Error(ErrorCode::ZeroCavity, "kappa1 + kappa2 + kappa_loss must be > 0");
    }
    return p;
}

double QubitInit::alpha_amp() const { return std::cos(theta); }
double QubitInit::beta_mag() const { return std::sin(theta); }

NetworkConfig validate_network(NetworkConfig net) {
    const std::size_t n = net.routers.size();
    if (n == 0) {
        throw Error(ErrorCode::WrongArity, "network needs at least one router");
    }
    for (const auto& r : net.routers) {
        validate_params(r);
    }
    if (net.qubit_inits.empty()) {
        net.qubit_inits.assign(n, QubitInit{});
    }
    if (net.qubit_inits.size() != n) {
        throw Error(ErrorCode::WrongArity, "qubit_inits length must match router count");
    }
    if (net.arm_phases.empty() && n >= 1) {
        net.arm_phases.assign(n - 1, 0.0);
    }
    if (net.arm_phases.size() != n - 1) {
        throw Error(ErrorCode::WrongArity, "arm_phases length must be N - 1");
    }
    return net;
}

} // namespace qrouter
