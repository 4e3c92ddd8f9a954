#include "qtime/fock.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace qtime::fock {

namespace {

constexpr double hermitian_tolerance = 1e-14;
constexpr double normalization_tolerance = 1e-9;
constexpr double coherent_tail_tolerance = 1e-10;

void require_same_basis(const BasisTag& lhs, const BasisTag& rhs, const char* op)
{
    if (!(lhs == rhs)) {
        throw Error(ErrorKind::dimension_mismatch,
                    std::string(op) + ": operands live in different bases (dim " +
                        std::to_string(lhs.dim) + " vs " + std::to_string(rhs.dim) + ")");
    }
}

bool conjugate_symmetric(const Eigen::MatrixXcd& m)
{
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= hermitian_tolerance * scale;
}

}  // namespace

FockBasis::FockBasis(int dim) : dim_(dim)
{
    if (dim < 2) {
        throw Error(ErrorKind::invalid_basis,
                    "Fock basis needs at least 2 levels, got " + std::to_string(dim));
    }
}

StateVector::StateVector(BasisTag basis, Eigen::VectorXcd amplitudes)
    : basis_(basis), amplitudes_(std::move(amplitudes))
{
    if (amplitudes_.size() != basis_.dim) {
        throw Error(ErrorKind::dimension_mismatch,
                    "state has " + std::to_string(amplitudes_.size()) +
                        " amplitudes for a basis of dimension " + std::to_string(basis_.dim));
    }
}

StateVector StateVector::normalized() const
{
    const double n = norm();
    if (n == 0.0) {
        throw Error(ErrorKind::not_normalized, "cannot normalize the zero vector");
    }
    return StateVector(basis_, amplitudes_ / n);
}

OperatorMatrix::OperatorMatrix(BasisTag basis, Eigen::MatrixXcd entries, bool hermitian)
    : basis_(basis), entries_(std::move(entries)), hermitian_(hermitian)
{
    if (entries_.rows() != basis_.dim || entries_.cols() != basis_.dim) {
        throw Error(ErrorKind::dimension_mismatch, "operator shape does not match its basis");
    }
    if (hermitian_ && !conjugate_symmetric(entries_)) {
        throw Error(ErrorKind::invalid_operator, "operator tagged hermitian is not conjugate-symmetric");
    }
}

OperatorMatrix OperatorMatrix::adjoint() const
{
    return OperatorMatrix(basis_, entries_.adjoint(), hermitian_);
}

bool OperatorMatrix::is_diagonal() const
{
    for (Eigen::Index j = 0; j < entries_.cols(); ++j) {
        for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
            if (i != j && entries_(i, j) != complex_t{}) {
                return false;
            }
        }
    }
    return true;
}

OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs)
{
    require_same_basis(lhs.basis_, rhs.basis_, "product");
    return OperatorMatrix(lhs.basis_, lhs.entries_ * rhs.entries_);
}

OperatorMatrix operator+(const OperatorMatrix& lhs, const OperatorMatrix& rhs)
{
    require_same_basis(lhs.basis_, rhs.basis_, "sum");
    return OperatorMatrix(lhs.basis_, lhs.entries_ + rhs.entries_, lhs.hermitian_ && rhs.hermitian_);
}

OperatorMatrix operator-(const OperatorMatrix& lhs, const OperatorMatrix& rhs)
{
    require_same_basis(lhs.basis_, rhs.basis_, "difference");
    return OperatorMatrix(lhs.basis_, lhs.entries_ - rhs.entries_, lhs.hermitian_ && rhs.hermitian_);
}

OperatorMatrix operator*(complex_t scale, const OperatorMatrix& op)
{
    return OperatorMatrix(op.basis_, scale * op.entries_, op.hermitian_ && scale.imag() == 0.0);
}

StateVector OperatorMatrix::apply(const StateVector& psi) const
{
    require_same_basis(basis_, psi.basis(), "apply");
    return StateVector(basis_, entries_ * psi.amplitudes());
}

LadderOperators ladder_operators(const FockBasis& basis)
{
    const int dim = basis.dim();
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    Eigen::MatrixXcd n_op = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) {
        n_op(n, n) = static_cast<double>(n);
    }
    OperatorMatrix lowering(basis.tag(), a);
    return {lowering, lowering.adjoint(), OperatorMatrix(basis.tag(), n_op, true)};
}

OperatorMatrix identity(const BasisTag& basis)
{
    return OperatorMatrix(basis, Eigen::MatrixXcd::Identity(basis.dim, basis.dim), true);
}

OperatorMatrix oscillator_hamiltonian(const FockBasis& basis, double omega)
{
    if (!(omega > 0.0)) {
        throw Error(ErrorKind::invalid_parameter, "omega must be positive, got " + std::to_string(omega));
    }
    const int dim = basis.dim();
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) {
        h(n, n) = omega * (n + 0.5);
    }
    return OperatorMatrix(basis.tag(), h, true);
}

OperatorMatrix commutator(const OperatorMatrix& lhs, const OperatorMatrix& rhs)
{
    require_same_basis(lhs.basis(), rhs.basis(), "commutator");
    return OperatorMatrix(lhs.basis(), lhs.entries() * rhs.entries() - rhs.entries() * lhs.entries());
}

complex_t expectation(const OperatorMatrix& op, const StateVector& psi)
{
    require_same_basis(op.basis(), psi.basis(), "expectation");
    const double norm = psi.norm();
    if (std::abs(norm * norm - 1.0) > normalization_tolerance) {
        throw Error(ErrorKind::not_normalized,
                    "expectation needs a normalized state, |psi|^2 = " + std::to_string(norm * norm));
    }
    const complex_t value = psi.amplitudes().dot(op.entries() * psi.amplitudes());
    if (op.hermitian()) {
        return {value.real(), 0.0};
    }
    return value;
}

StateVector number_state(const FockBasis& basis, int n)
{
    if (n < 0 || n >= basis.dim()) {
        throw Error(ErrorKind::invalid_parameter, "number state index out of range: " + std::to_string(n));
    }
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(basis.dim());
    amps(n) = 1.0;
    return StateVector(basis.tag(), amps);
}

double poisson_tail(double mean, int first)
{
    if (mean <= 0.0) {
        return first <= 0 ? 1.0 : 0.0;
    }
    if (first <= 0) {
        return 1.0;
    }
    // Terms peak near n = mean; start at `first` and walk outwards until they vanish.
    double total = 0.0;
    const double log_mean = std::log(mean);
    for (int n = first;; ++n) {
        const double term = std::exp(n * log_mean - mean - std::lgamma(n + 1.0));
        total += term;
        if (n > mean && term < 1e-18 * total) {
            break;
        }
        if (n > mean && term == 0.0) {
            break;
        }
    }
    return std::min(total, 1.0);
}

int coherent_min_dim(double mean, double tail_tolerance)
{
    int dim = 2;
    while (poisson_tail(mean, dim) >= tail_tolerance) {
        ++dim;
    }
    return dim;
}

StateVector coherent_state(complex_t alpha, const FockBasis& basis)
{
    const double mean = std::norm(alpha);
    const double tail = poisson_tail(mean, basis.dim());
    if (tail >= coherent_tail_tolerance) {
        const int required = coherent_min_dim(mean, coherent_tail_tolerance);
        char message[160];
        std::snprintf(message, sizeof message,
                      "coherent state |alpha|^2 = %g loses %.3g of its weight at dim %d; need dim >= %d", mean,
                      tail, basis.dim(), required);
        throw TruncationError(message, required);
    }
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(basis.dim());
    amps(0) = 1.0;
    for (int n = 1; n < basis.dim(); ++n) {
        amps(n) = amps(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    }
    return StateVector(basis.tag(), amps).normalized();
}

StateVector evolve(const OperatorMatrix& hamiltonian, const StateVector& psi, double t)
{
    if (!hamiltonian.hermitian()) {
        throw Error(ErrorKind::invalid_operator, "evolution needs a hermitian Hamiltonian");
    }
    require_same_basis(hamiltonian.basis(), psi.basis(), "evolve");
    const complex_t minus_i_t{0.0, -t};

    if (hamiltonian.is_diagonal()) {
        Eigen::VectorXcd out = psi.amplitudes();
        for (Eigen::Index n = 0; n < out.size(); ++n) {
            out(n) *= std::exp(minus_i_t * hamiltonian.entries()(n, n).real());
        }
        return StateVector(psi.basis(), out);
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hamiltonian.entries());
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::invalid_operator, "eigendecomposition of the Hamiltonian failed");
    }
    const auto& vecs = solver.eigenvectors();
    Eigen::VectorXcd coeffs = vecs.adjoint() * psi.amplitudes();
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
        coeffs(k) *= std::exp(minus_i_t * solver.eigenvalues()(k));
    }
    return StateVector(psi.basis(), vecs * coeffs);
}

}  // namespace qtime::fock
