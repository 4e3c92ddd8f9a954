#pragma once

#include <stdexcept>
#include <string>

namespace qtime {

enum class ErrorKind {
    invalid_basis,
    invalid_parameter,
    dimension_mismatch,
    not_normalized,
    invalid_operator,
    unsupported_configuration,
    mixed_support,
    truncation,
    undefined_phase,
    boundary_violation,
    momentum_aliasing,
};

const char* to_string(ErrorKind kind) noexcept;

// Validation errors are caller mistakes; the rest are numerical contracts
// that a well-formed request can still break (truncation, boundary hits).
bool is_validation_error(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class TruncationError : public Error {
public:
    TruncationError(const std::string& what, int required_dim)
        : Error(ErrorKind::truncation, what), required_dim_(required_dim) {}

    int required_dim() const noexcept { return required_dim_; }

private:
    int required_dim_;
};

class BoundaryError : public Error {
public:
    BoundaryError(const std::string& what, double time)
        : Error(ErrorKind::boundary_violation, what), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

class PhaseError : public Error {
public:
    PhaseError(const std::string& what, long sample_index = -1)
        : Error(ErrorKind::undefined_phase, what), sample_index_(sample_index) {}

    /// Index of the offending sample in a trajectory, or -1 for a single evaluation.
    long sample_index() const noexcept { return sample_index_; }

private:
    long sample_index_;
};

}  // namespace qtime
