#pragma once

// CHSH evaluation for the factorizable polarizer model and for the quantum
// two-photon correlation cos 2(a - b).

#include <array>
#include <cstdint>
#include <vector>

#include "qtime/polarizer.hpp"
#include "qtime/rng.hpp"

namespace qtime::bell {

using polarizer::TransmissionProfile;

struct ChshSetting {
    double a = 0.0;
    double a_prime = 0.0;
    double b = 0.0;
    double b_prime = 0.0;

    /// (0, pi/4; pi/8, 3pi/8), the maximal-violation angles for cos 2 theta.
    static ChshSetting canonical();
    /// Angles reduced into [0, pi).
    ChshSetting reduced() const;
};

struct CorrelationEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long n_events = 0;  // zero for quadrature and closed forms
};

/// Outcome +1 when a photon passes, -1 when absorbed; lambda uniform and shared.
/// E(a, b) = (1/pi) integral (2 p1(lambda - a) - 1)(2 p1(lambda - b) - 1).
CorrelationEstimate hv_correlation(const TransmissionProfile& p1, double a, double b);

CorrelationEstimate qm_correlation(double a, double b);

/// Correlations for (a, b), (a, b'), (a', b), (a', b') in that order.
using ChshCorrelations = std::array<CorrelationEstimate, 4>;

/// S = E(a, b) - E(a, b') + E(a', b) + E(a', b').
double chsh(const ChshCorrelations& correlations);

/// Standard error of S for independent estimates.
double chsh_std_error(const ChshCorrelations& correlations);

template <typename CorrelationFn>
ChshCorrelations correlations_at(const ChshSetting& s, CorrelationFn&& correlation)
{
    return {correlation(s.a, s.b), correlation(s.a, s.b_prime), correlation(s.a_prime, s.b),
            correlation(s.a_prime, s.b_prime)};
}

/// Event-level simulation of the hidden-variable model; deterministic in `seed`.
CorrelationEstimate mc_simulate(const TransmissionProfile& p1, double a, double b, long n_events,
                                std::uint64_t seed);

/// A random box-feasible profile: an affinely squeezed random cosine series,
/// or its 0/1 sign pattern when `deterministic` is set.
TransmissionProfile random_profile(Rng& rng, int n_modes, int grid_size, bool deterministic);

struct SweepResult {
    double max_abs_s = 0.0;
    int worst_profile = -1;
    int n_profiles = 0;
    int n_deterministic = 0;
    std::vector<double> s_values;
};

/// |S| at the canonical angles over random admissible profiles. Every tenth
/// profile is a deterministic 0/1 profile. grid_size must be a multiple of 8
/// so the canonical angle differences are whole-sample shifts.
SweepResult local_bound_sweep(int n_profiles, int n_modes, std::uint64_t seed, int grid_size = 512);

}  // namespace qtime::bell
