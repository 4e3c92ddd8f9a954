#include "qtime/errors.hpp"

namespace qtime {

const char* to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::invalid_basis: return "invalid-basis";
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::dimension_mismatch: return "dimension-mismatch";
    case ErrorKind::not_normalized: return "not-normalized";
    case ErrorKind::invalid_operator: return "invalid-operator";
    case ErrorKind::unsupported_configuration: return "unsupported-configuration";
    case ErrorKind::mixed_support: return "mixed-support";
    case ErrorKind::truncation: return "truncation";
    case ErrorKind::undefined_phase: return "undefined-phase";
    case ErrorKind::boundary_violation: return "boundary-violation";
    case ErrorKind::momentum_aliasing: return "momentum-aliasing";
    }
    return "unknown";
}

bool is_validation_error(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::truncation:
    case ErrorKind::undefined_phase:
    case ErrorKind::boundary_violation:
    case ErrorKind::momentum_aliasing:
        return false;
    default:
        return true;
    }
}

}  // namespace qtime
