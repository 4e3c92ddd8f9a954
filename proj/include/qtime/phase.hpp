#pragma once

// Exponential phase operator E = exp(-i Phi): the one-sided shift on the
// ordinary Fock space, and the two-sided cyclic shift on the doubled space
// H+ (+) H- where it becomes a permutation, hence exactly unitary.

#include <vector>

#include "qtime/fock.hpp"

namespace qtime::phase {

using fock::FockBasis;
using fock::OperatorMatrix;
using fock::StateVector;

enum class Subspace { plus, minus };

const char* to_string(Subspace s) noexcept;

/// Two-sided number states n = -N..N-1; n >= 0 spans H+, n < 0 spans H-.
/// Storage position of index n is n + N.
class DoubledBasis {
public:
    DoubledBasis(int half_dim, bool cyclic = true);

    int half_dim() const noexcept { return half_dim_; }
    int dim() const noexcept { return 2 * half_dim_; }
    bool cyclic() const noexcept { return cyclic_; }
    BasisTag tag() const noexcept { return {BasisKind::doubled, dim(), cyclic_}; }

    int min_index() const noexcept { return -half_dim_; }
    int max_index() const noexcept { return half_dim_ - 1; }
    int position(int index) const;
    int index_at(int position) const noexcept { return position - half_dim_; }

    static Subspace subspace_of(int index) noexcept { return index >= 0 ? Subspace::plus : Subspace::minus; }

    /// Diagonal 0/1 projector onto one subspace.
    OperatorMatrix projector(Subspace s) const;

private:
    int half_dim_;
    bool cyclic_;
};

/// Normalized lowering shift: E|n> = |n-1>, E|0> = 0.
OperatorMatrix sg_phase_operator(const FockBasis& basis);

struct DefectReport {
    double norm = 0.0;          // operator 2-norm of E^dag E - I
    int rank = 0;
    std::vector<int> support;   // basis positions where E^dag E - I acts
};

DefectReport isometry_defect(const OperatorMatrix& op, double tolerance = 1e-12);

/// Cyclic two-sided shift n -> n-1 with -N -> N-1; carries the H+ vacuum into H-.
OperatorMatrix extended_phase_operator(const DoubledBasis& basis);

/// omega (n + 1/2) on H+, omega (-n - 1/2) on H-: a mirrored, bounded-below ladder.
OperatorMatrix extended_hamiltonian(const DoubledBasis& basis, double omega);

/// Fock amplitudes placed at index k (H+) or at the mirror index -k-1 (H-).
StateVector embed(const StateVector& fock_state, const DoubledBasis& basis, Subspace target);

/// Index reflection n -> -n-1, exchanging H+ and H-.
StateVector mirror(const StateVector& psi, const DoubledBasis& basis);

/// Weight (squared norm) of psi inside one subspace.
double subspace_weight(const StateVector& psi, const DoubledBasis& basis, Subspace s);

/// arg <psi|E^dag|psi> in [0, 2pi). Throws PhaseError when |<E>| <= 1e-12.
double phase_expectation(const StateVector& psi, const OperatorMatrix& shift);

/// tan(Phi/2), the read-out that runs from -inf to +inf over one period.
double tan_half_phase(double phase);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Removes 2pi jumps so consecutive samples differ by less than pi.
std::vector<double> unwrap(const std::vector<double>& phases);

struct PhaseTrajectory {
    std::vector<double> times;
    std::vector<double> phase_values;  // each in [0, 2pi)
    Subspace subspace = Subspace::plus;

    std::vector<double> unwrapped() const { return unwrap(phase_values); }
    LinearFit fit() const { return fit_line(times, unwrapped()); }
};

/// Evolves psi0 under extended_hamiltonian and records the measured phase.
/// psi0 must live in a single subspace (other-subspace norm <= 1e-12).
PhaseTrajectory phase_trajectory(const DoubledBasis& basis, double omega, const StateVector& psi0,
                                 const std::vector<double>& times);

}  // namespace qtime::phase
