#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "qtime/fock.hpp"
#include "qtime/rng.hpp"

using namespace qtime;
using namespace qtime::fock;

namespace {

StateVector random_state(Rng& rng, const FockBasis& basis)
{
    Eigen::VectorXcd amps(basis.dim());
    for (int i = 0; i < basis.dim(); ++i) {
        amps(i) = {rng.normal(), rng.normal()};
    }
    return StateVector(basis.tag(), amps).normalized();
}

OperatorMatrix random_hermitian(Rng& rng, const FockBasis& basis)
{
    Eigen::MatrixXcd m(basis.dim(), basis.dim());
    for (int i = 0; i < basis.dim(); ++i) {
        for (int j = 0; j < basis.dim(); ++j) {
            m(i, j) = {rng.normal(), rng.normal()};
        }
    }
    Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
    return OperatorMatrix(basis.tag(), h, true);
}

}  // namespace

TEST_CASE("ladder operators on the smallest basis")
{
    const auto ops = ladder_operators(FockBasis(2));
    CHECK(ops.a.entries()(0, 1) == complex_t(1.0));
    CHECK(ops.a.entries()(1, 0) == complex_t(0.0));
    CHECK(ops.a.entries()(0, 0) == complex_t(0.0));
    CHECK(ops.a.entries()(1, 1) == complex_t(0.0));
}

TEST_CASE("number operator is diag(0..dim-1)")
{
    const auto ops = ladder_operators(FockBasis(4));
    for (int n = 0; n < 4; ++n) {
        CHECK(ops.n_op.entries()(n, n).real() == static_cast<double>(n));
    }
    const Eigen::MatrixXcd product = (ops.a_dag * ops.a).entries();
    CHECK((product - ops.n_op.entries()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((ops.a_dag.entries() - ops.a.entries().adjoint()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ladder action a|n> = sqrt(n)|n-1>")
{
    const FockBasis basis(7);
    const auto ops = ladder_operators(basis);
    CHECK(ops.a.apply(number_state(basis, 0)).norm() == 0.0);
    for (int n = 1; n < 7; ++n) {
        const auto out = ops.a.apply(number_state(basis, n));
        CHECK(std::abs(out.amplitudes()(n - 1) - std::sqrt(double(n))) < 1e-15);
        CHECK(std::abs(out.norm() - std::sqrt(double(n))) < 1e-15);
    }
}

TEST_CASE("truncated commutator [a, a_dag] = I - N |N-1><N-1|")
{
    for (int dim : {2, 3, 8, 16, 64}) {
        const FockBasis basis(dim);
        const auto ops = ladder_operators(basis);
        const Eigen::MatrixXcd c = commutator(ops.a, ops.a_dag).entries();
        // Oracle: the expected matrix written out directly.
        Eigen::MatrixXcd expected = Eigen::MatrixXcd::Identity(dim, dim);
        expected(dim - 1, dim - 1) -= static_cast<double>(dim);
        CHECK((c - expected).cwiseAbs().maxCoeff() < 1e-12);

        const Eigen::MatrixXcd defect = c - Eigen::MatrixXcd::Identity(dim, dim);
        int nonzero = 0;
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j) {
                nonzero += std::abs(defect(i, j)) > 1e-12 ? 1 : 0;
            }
        }
        CHECK(nonzero == 1);
        CHECK(c(dim - 1, dim - 1).real() == doctest::Approx(-(dim - 1)).epsilon(1e-15));
        CHECK(defect(dim - 1, dim - 1).real() == doctest::Approx(-dim).epsilon(1e-15));
    }
}

TEST_CASE("invalid basis and parameters")
{
    CHECK_THROWS_AS(FockBasis(1), Error);
    try {
        FockBasis basis(0);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::invalid_basis);
    }
    try {
        (void)oscillator_hamiltonian(FockBasis(3), 0.0);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::invalid_parameter);
    }
    CHECK_THROWS_AS(oscillator_hamiltonian(FockBasis(3), -1.0), Error);
}

TEST_CASE("oscillator hamiltonian")
{
    const auto h = oscillator_hamiltonian(FockBasis(3), 1.0);
    CHECK(h.entries()(0, 0).real() == 0.5);
    CHECK(h.entries()(1, 1).real() == 1.5);
    CHECK(h.entries()(2, 2).real() == 2.5);
    CHECK(h.hermitian());
    CHECK(h.is_diagonal());

    SUBCASE("[H, a] = -omega a below the truncation edge")
    {
        const FockBasis basis(16);
        const auto ops = ladder_operators(basis);
        const auto h2 = oscillator_hamiltonian(basis, 2.0);
        const Eigen::MatrixXcd residual = commutator(h2, ops.a).entries() + 2.0 * ops.a.entries();
        CHECK(residual.topLeftCorner(15, 15).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("[H, a_dag] = +omega a_dag below the edge")
    {
        const FockBasis basis(8);
        const auto ops = ladder_operators(basis);
        const auto h1 = oscillator_hamiltonian(basis, 1.0);
        const Eigen::MatrixXcd residual = commutator(h1, ops.a_dag).entries() - ops.a_dag.entries();
        CHECK(residual.topLeftCorner(7, 7).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("commutator basics")
{
    const FockBasis basis(6);
    const auto ops = ladder_operators(basis);
    const auto h = oscillator_hamiltonian(basis, 1.3);
    CHECK(commutator(ops.a, ops.a).entries().cwiseAbs().maxCoeff() == 0.0);
    CHECK(commutator(h, ops.n_op).entries().cwiseAbs().maxCoeff() == 0.0);
    const auto other = ladder_operators(FockBasis(5));
    try {
        (void)commutator(ops.a, other.a);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::dimension_mismatch);
    }
}

TEST_CASE("hermitian tag is enforced")
{
    const FockBasis basis(3);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(OperatorMatrix(basis.tag(), m, true), Error);
    const OperatorMatrix not_hermitian(basis.tag(), m);
    try {
        (void)evolve(not_hermitian, number_state(basis, 0), 1.0);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::invalid_operator);
    }
}

TEST_CASE("expectation values")
{
    const FockBasis basis(8);
    const auto ops = ladder_operators(basis);
    CHECK(expectation(ops.n_op, number_state(basis, 0)) == complex_t(0.0));
    CHECK(expectation(oscillator_hamiltonian(basis, 1.0), number_state(basis, 3)).real() == 3.5);

    Eigen::VectorXcd unnormalized = Eigen::VectorXcd::Zero(8);
    unnormalized(0) = 1.0 + 1e-6;
    try {
        (void)expectation(ops.n_op, StateVector(basis.tag(), unnormalized));
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::not_normalized);
    }
    // Inside the 1e-9 relative band it is accepted.
    unnormalized(0) = 1.0 + 1e-12;
    CHECK_NOTHROW((void)expectation(ops.n_op, StateVector(basis.tag(), unnormalized)));
    CHECK_THROWS_AS((void)expectation(ops.n_op, number_state(FockBasis(4), 0)), Error);
}

TEST_CASE("hermitian expectations are real for random states")
{
    Rng rng(7);
    const FockBasis basis(12);
    for (int trial = 0; trial < 50; ++trial) {
        const auto h = random_hermitian(rng, basis);
        const auto psi = random_state(rng, basis);
        // Raw complex value before the hermitian projection.
        const complex_t raw = psi.amplitudes().dot(h.entries() * psi.amplitudes());
        CHECK(std::abs(raw.imag()) < 1e-12);
        CHECK(expectation(h, psi).imag() == 0.0);
    }
}

TEST_CASE("coherent states")
{
    SUBCASE("alpha = 0 is the vacuum")
    {
        const auto psi = coherent_state(0.0, FockBasis(4));
        CHECK(psi.amplitudes()(0) == complex_t(1.0));
        CHECK(psi.amplitudes().tail(3).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("alpha = 2 in dim 32: <a> = alpha and <N> = |alpha|^2")
    {
        const FockBasis basis(32);
        const auto ops = ladder_operators(basis);
        const auto psi = coherent_state(2.0, basis);
        CHECK(std::abs(expectation(ops.a, psi) - complex_t(2.0)) < 1e-8);
        // Tail bound: the discarded Poisson weight at dim 32 is ~1.5e-18.
        CHECK(poisson_tail(4.0, 32) < 1e-17);
        CHECK(std::abs(expectation(ops.n_op, psi).real() - 4.0) < 1e-12);
    }
    SUBCASE("complex alpha keeps its phase")
    {
        const FockBasis basis(40);
        const complex_t alpha = std::polar(2.5, 0.7);
        const auto psi = coherent_state(alpha, basis);
        CHECK(std::abs(expectation(ladder_operators(basis).a, psi) - alpha) < 1e-8);
    }
    SUBCASE("alpha = 3 in dim 12 is rejected with the required dimension")
    {
        // Poisson(9) tail beyond n = 11 is ~0.197; first dim with tail < 1e-10 is 35.
        CHECK(poisson_tail(9.0, 12) == doctest::Approx(0.19699161747065816).epsilon(1e-10));
        try {
            (void)coherent_state(3.0, FockBasis(12));
            FAIL("expected throw");
        } catch (const TruncationError& e) {
            CHECK(e.kind() == ErrorKind::truncation);
            CHECK(e.required_dim() == 35);
        }
        CHECK(coherent_min_dim(4.0) == 23);
        CHECK_NOTHROW((void)coherent_state(3.0, FockBasis(35)));
        CHECK_THROWS_AS((void)coherent_state(3.0, FockBasis(34)), TruncationError);
    }
}

TEST_CASE("evolution")
{
    const FockBasis basis(32);
    const auto h = oscillator_hamiltonian(basis, 1.0);
    const auto ops = ladder_operators(basis);

    SUBCASE("t = 0 is the identity")
    {
        const auto psi = coherent_state(complex_t(1.0, 0.5), basis);
        CHECK((evolve(h, psi, 0.0).amplitudes() - psi.amplitudes()).norm() == 0.0);
    }
    SUBCASE("eigenstates pick up exp(-i omega (n + 1/2) t)")
    {
        const double t = 0.37;
        for (int n : {0, 3, 17}) {
            const auto out = evolve(h, number_state(basis, n), t);
            CHECK(std::abs(out.amplitudes()(n) - std::polar(1.0, -(n + 0.5) * t)) < 1e-15);
        }
    }
    SUBCASE("coherent amplitude rotates: <a>(pi/2) = -i alpha")
    {
        const complex_t alpha = 2.0;
        const auto out = evolve(h, coherent_state(alpha, basis), 0.5 * std::numbers::pi);
        CHECK(std::abs(expectation(ops.a, out) - complex_t(0.0, -1.0) * alpha) < 1e-8);
    }
}

TEST_CASE("evolution invariants over random states")
{
    Rng rng(2024);
    const FockBasis basis(10);
    const auto diagonal = oscillator_hamiltonian(basis, 1.7);
    for (int trial = 0; trial < 40; ++trial) {
        const auto psi = random_state(rng, basis);
        const auto dense = random_hermitian(rng, basis);
        const double t1 = rng.uniform(-5.0, 5.0);
        const double t2 = rng.uniform(-5.0, 5.0);
        for (const auto* h : {&diagonal, &dense}) {
            const auto once = evolve(*h, psi, t1);
            CHECK(std::abs(once.norm() - 1.0) < 1e-12);
            const auto twice = evolve(*h, once, t2);
            const auto joint = evolve(*h, psi, t1 + t2);
            CHECK((twice.amplitudes() - joint.amplitudes()).cwiseAbs().maxCoeff() < 1e-10);
        }
        // Independent route: dense matrix exponential.
        const Eigen::MatrixXcd u = (complex_t(0.0, -t1) * dense.entries()).exp();
        CHECK((evolve(dense, psi, t1).amplitudes() - u * psi.amplitudes()).cwiseAbs().maxCoeff() < 1e-10);
    }
}
