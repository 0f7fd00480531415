// error.hpp — typed error codes for the qrouter library.

#pragma once

#include <stdexcept>
#include <string>

namespace qrouter {

enum class ErrorCode {
    NegativeRate,        // a decay rate or coupling below zero
    ZeroCavity,          // total cavity decay kappa1+kappa2+kappa_loss == 0
    BadStep,             // unusable time grid (dt >= T, dt <= 0, ...)
    DegeneratePulse,     // pulse unresolvable on the grid or spec out of range
    GridMismatch,        // signals defined on different time grids
    NonResonant,         // pulsed solver called with nonzero detunings
    NonConverged,        // dt-halving check exceeded tolerance
    ZeroSignal,          // overlap of a zero-norm signal
    WrongArity,          // wrong qubit/router count for the operation
    Degenerate,          // all branch coefficients vanish; no state to condition on
    SharedQubitMismatch, // link states are incompatible on the shared qubit
    ConfigInvalid,       // bad experiment configuration
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message),
          code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace qrouter
