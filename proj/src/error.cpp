#include "qrouter/error.hpp"

namespace qrouter {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NegativeRate: return "NEGATIVE_RATE";
        case ErrorCode::ZeroCavity: return "ZERO_CAVITY";
        case ErrorCode::BadStep: return "BAD_STEP";
        case ErrorCode::DegeneratePulse: return "DEGENERATE_PULSE";
        case ErrorCode::GridMismatch: return "GRID_MISMATCH";
        case ErrorCode::NonResonant: return "NON_RESONANT";
        case ErrorCode::NonConverged: return "NON_CONVERGED";
        case ErrorCode::ZeroSignal: return "ZERO_SIGNAL";
        case ErrorCode::WrongArity: return "WRONG_ARITY";
        case ErrorCode::Degenerate: return "DEGENERATE";
        case ErrorCode::SharedQubitMismatch: return "SHARED_QUBIT_MISMATCH";
        case ErrorCode::ConfigInvalid: return "CONFIG_INVALID";
    }
    return "UNKNOWN";
}

} // namespace qrouter
