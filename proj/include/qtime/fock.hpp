#pragma once

// Truncated Fock-space linear algebra for a single oscillator mode.
// Units: hbar = 1, [a, a_dag] = 1 below the truncation edge, H = omega (N + 1/2).

#include <complex>

#include <Eigen/Dense>

#include "qtime/errors.hpp"

namespace qtime {

using complex_t = std::complex<double>;

enum class BasisKind { fock, doubled };

/// Identifies the space a vector or matrix lives in. Two objects interact only
/// when their tags compare equal.
struct BasisTag {
    BasisKind kind = BasisKind::fock;
    int dim = 0;
    bool cyclic = false;

    bool operator==(const BasisTag&) const = default;
};

namespace fock {

class FockBasis {
public:
    explicit FockBasis(int dim);

    int dim() const noexcept { return dim_; }
    BasisTag tag() const noexcept { return {BasisKind::fock, dim_, false}; }

private:
    int dim_;
};

class StateVector {
public:
    StateVector(BasisTag basis, Eigen::VectorXcd amplitudes);

    const BasisTag& basis() const noexcept { return basis_; }
    const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }
    int dim() const noexcept { return basis_.dim; }

    double norm() const { return amplitudes_.norm(); }
    StateVector normalized() const;

private:
    BasisTag basis_;
    Eigen::VectorXcd amplitudes_;
};

class OperatorMatrix {
public:
    /// A hermitian tag is checked: entries must be conjugate-symmetric within 1e-14.
    OperatorMatrix(BasisTag basis, Eigen::MatrixXcd entries, bool hermitian = false);

    const BasisTag& basis() const noexcept { return basis_; }
    const Eigen::MatrixXcd& entries() const noexcept { return entries_; }
    bool hermitian() const noexcept { return hermitian_; }
    int dim() const noexcept { return basis_.dim; }

    OperatorMatrix adjoint() const;
    bool is_diagonal() const;

    friend OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs);
    friend OperatorMatrix operator+(const OperatorMatrix& lhs, const OperatorMatrix& rhs);
    friend OperatorMatrix operator-(const OperatorMatrix& lhs, const OperatorMatrix& rhs);
    friend OperatorMatrix operator*(complex_t scale, const OperatorMatrix& op);

    StateVector apply(const StateVector& psi) const;

private:
    BasisTag basis_;
    Eigen::MatrixXcd entries_;
    bool hermitian_;
};

struct LadderOperators {
    OperatorMatrix a;
    OperatorMatrix a_dag;
    OperatorMatrix n_op;
};

LadderOperators ladder_operators(const FockBasis& basis);

OperatorMatrix identity(const BasisTag& basis);

OperatorMatrix oscillator_hamiltonian(const FockBasis& basis, double omega);

/// AB - BA.
OperatorMatrix commutator(const OperatorMatrix& lhs, const OperatorMatrix& rhs);

/// <psi|A|psi>. Throws when psi is off unit norm by more than 1e-9 (relative).
complex_t expectation(const OperatorMatrix& op, const StateVector& psi);

StateVector number_state(const FockBasis& basis, int n);

/// Poisson weight P(n >= first) for mean `mean`, summed directly over the tail.
double poisson_tail(double mean, int first);

/// Smallest basis dimension whose discarded coherent-state weight is below `tail_tolerance`.
int coherent_min_dim(double mean, double tail_tolerance = 1e-10);

/// Truncated coherent state; refuses truncations that drop more than 1e-10 of the weight.
StateVector coherent_state(complex_t alpha, const FockBasis& basis);

/// exp(-i H t) psi by exact eigendecomposition of the hermitian H.
StateVector evolve(const OperatorMatrix& hamiltonian, const StateVector& psi, double t);

}  // namespace fock
}  // namespace qtime
