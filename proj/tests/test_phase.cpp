#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qtime/phase.hpp"
#include "qtime/rng.hpp"

using namespace qtime;
using namespace qtime::phase;
using std::numbers::pi;

namespace {

StateVector random_in_subspace(Rng& rng, const DoubledBasis& basis, Subspace s)
{
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(basis.dim());
    for (int n = basis.min_index(); n <= basis.max_index(); ++n) {
        if (DoubledBasis::subspace_of(n) == s) {
            amps(basis.position(n)) = {rng.normal(), rng.normal()};
        }
    }
    return StateVector(basis.tag(), amps).normalized();
}

std::vector<double> time_grid(double stop, int steps)
{
    std::vector<double> t(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i) {
        t[i] = stop * i / steps;
    }
    return t;
}

}  // namespace

TEST_CASE("one-sided shift matrix")
{
    const auto e = sg_phase_operator(FockBasis(3)).entries();
    Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(3, 3);
    expected(0, 1) = 1.0;
    expected(1, 2) = 1.0;
    CHECK((e - expected).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(sg_phase_operator(FockBasis(1)), Error);
}

TEST_CASE("one-sided shift is an isometry only off the vacuum")
{
    for (int dim : {2, 16, 64}) {
        const auto e = sg_phase_operator(FockBasis(dim)).entries();
        Eigen::MatrixXcd vacuum_projector = Eigen::MatrixXcd::Zero(dim, dim);
        vacuum_projector(0, 0) = 1.0;
        const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(dim, dim);
        CHECK((e.adjoint() * e - (identity - vacuum_projector)).cwiseAbs().maxCoeff() < 1e-14);

        Eigen::MatrixXcd top_projector = Eigen::MatrixXcd::Zero(dim, dim);
        top_projector(dim - 1, dim - 1) = 1.0;
        CHECK((e * e.adjoint() - (identity - top_projector)).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("[H, E] = -omega E below the truncation edge")
{
    const FockBasis basis(20);
    const double omega = 1.4;
    const auto e = sg_phase_operator(basis);
    const Eigen::MatrixXcd residual =
        fock::commutator(fock::oscillator_hamiltonian(basis, omega), e).entries() + omega * e.entries();
    CHECK(residual.topLeftCorner(19, 19).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("isometry defect reports")
{
    const auto sg = isometry_defect(sg_phase_operator(FockBasis(16)));
    CHECK(sg.rank == 1);
    CHECK(sg.support == std::vector<int>{0});
    CHECK(sg.norm == doctest::Approx(1.0).epsilon(1e-14));

    const auto id = isometry_defect(fock::identity(FockBasis(5).tag()));
    CHECK(id.norm == 0.0);
    CHECK(id.rank == 0);
    CHECK(id.support.empty());

    const auto ext = isometry_defect(extended_phase_operator(DoubledBasis(8)));
    CHECK(ext.norm < 1e-14);
    CHECK(ext.rank == 0);
}

TEST_CASE("extended shift is a cyclic permutation")
{
    const DoubledBasis basis(2);
    const auto e = extended_phase_operator(basis).entries();
    // 1 -> 0 -> -1 -> -2 -> 1
    auto image = [&](int n) {
        const Eigen::VectorXcd col = e.col(basis.position(n));
        Eigen::Index row = 0;
        col.cwiseAbs().maxCoeff(&row);
        return basis.index_at(static_cast<int>(row));
    };
    CHECK(image(1) == 0);
    CHECK(image(0) == -1);
    CHECK(image(-1) == -2);
    CHECK(image(-2) == 1);

    for (int half : {2, 5, 33}) {
        const DoubledBasis b(half);
        const Eigen::MatrixXcd p = extended_phase_operator(b).entries();
        for (int i = 0; i < b.dim(); ++i) {
            int ones_row = 0;
            int ones_col = 0;
            for (int j = 0; j < b.dim(); ++j) {
                ones_row += p(i, j) == complex_t(1.0) ? 1 : 0;
                ones_col += p(j, i) == complex_t(1.0) ? 1 : 0;
                CHECK((p(i, j) == complex_t(0.0) || p(i, j) == complex_t(1.0)));
            }
            CHECK(ones_row == 1);
            CHECK(ones_col == 1);
        }
        const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(b.dim(), b.dim());
        CHECK((p.adjoint() * p - identity).cwiseAbs().maxCoeff() < 1e-15);
        CHECK((p * p.adjoint() - identity).cwiseAbs().maxCoeff() < 1e-15);
    }
}

TEST_CASE("extended shift carries the H+ vacuum into H-")
{
    const DoubledBasis basis(6);
    const auto e = extended_phase_operator(basis);
    auto vacuum = fock::number_state(FockBasis(6), 0);
    const auto out = e.apply(embed(vacuum, basis, Subspace::plus));
    CHECK(subspace_weight(out, basis, Subspace::minus) == 1.0);
    CHECK(subspace_weight(out, basis, Subspace::plus) == 0.0);
    CHECK(out.amplitudes()(basis.position(-1)) == complex_t(1.0));
}

TEST_CASE("non-cyclic doubled basis is unsupported")
{
    try {
        (void)extended_phase_operator(DoubledBasis(4, false));
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::unsupported_configuration);
    }
    CHECK_THROWS_AS(DoubledBasis(1), Error);
}

TEST_CASE("extended hamiltonian")
{
    const DoubledBasis basis(2);
    const auto h = extended_hamiltonian(basis, 1.0).entries();
    CHECK(h(0, 0).real() == 1.5);
    CHECK(h(1, 1).real() == 0.5);
    CHECK(h(2, 2).real() == 0.5);
    CHECK(h(3, 3).real() == 1.5);
    CHECK_THROWS_AS(extended_hamiltonian(basis, 0.0), Error);

    const DoubledBasis big(40);
    const double omega = 2.3;
    const auto h_big = extended_hamiltonian(big, omega);
    CHECK(h_big.entries().diagonal().real().minCoeff() == doctest::Approx(omega / 2).epsilon(1e-15));
    for (Subspace s : {Subspace::plus, Subspace::minus}) {
        const auto p = big.projector(s);
        CHECK(fock::commutator(h_big, p).entries().cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("projectors partition the doubled basis")
{
    const DoubledBasis basis(7);
    const Eigen::MatrixXcd plus = basis.projector(Subspace::plus).entries();
    const Eigen::MatrixXcd minus = basis.projector(Subspace::minus).entries();
    CHECK((plus + minus - Eigen::MatrixXcd::Identity(14, 14)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((plus * minus).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("block-diagonal evolution never leaks between subspaces")
{
    Rng rng(11);
    const DoubledBasis basis(24);
    const auto h = extended_hamiltonian(basis, 1.0);
    const auto p_plus = basis.projector(Subspace::plus);
    const auto p_minus = basis.projector(Subspace::minus);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto psi_plus = random_in_subspace(rng, basis, Subspace::plus);
        const auto psi_minus = random_in_subspace(rng, basis, Subspace::minus);
        for (int k = 0; k < 20; ++k) {
            const double t = rng.uniform(-50.0, 50.0);
            worst = std::max(worst, p_minus.apply(fock::evolve(h, psi_plus, t)).norm());
            worst = std::max(worst, p_plus.apply(fock::evolve(h, psi_minus, t)).norm());
        }
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("[H_ext, E_ext] per block: -omega on H+, +omega on H-, 0 on the vacuum link")
{
    const DoubledBasis basis(12);
    const double omega = 0.8;
    const auto e = extended_phase_operator(basis);
    const Eigen::MatrixXcd c = fock::commutator(extended_hamiltonian(basis, omega), e).entries();
    for (int n = basis.min_index() + 1; n <= basis.max_index(); ++n) {
        const int row = basis.position(n - 1);
        const int col = basis.position(n);
        const double expected = n >= 1 ? -omega : (n == 0 ? 0.0 : omega);
        CHECK(std::abs(c(row, col) - expected * e.entries()(row, col)) < 1e-12);
    }
    // Nothing outside the shift pattern.
    const Eigen::MatrixXcd off_pattern = c - c.cwiseProduct(e.entries());
    CHECK(off_pattern.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("phase expectation")
{
    SUBCASE("number states have no phase")
    {
        const FockBasis basis(8);
        try {
            (void)phase_expectation(fock::number_state(basis, 3), sg_phase_operator(basis));
            FAIL("expected throw");
        } catch (const PhaseError& e) {
            CHECK(e.kind() == ErrorKind::undefined_phase);
        }
    }
    SUBCASE("(|0> + |1>)/sqrt2 has <E_dag> = 1/2 and phase 0")
    {
        const FockBasis basis(2);
        Eigen::VectorXcd amps(2);
        amps << 1.0, 1.0;
        const StateVector psi(basis.tag(), amps / std::sqrt(2.0));
        const auto e = sg_phase_operator(basis);
        CHECK(std::abs(fock::expectation(e.adjoint(), psi) - complex_t(0.5)) < 1e-15);
        CHECK(phase_expectation(psi, e) == 0.0);
    }
    SUBCASE("coherent state alpha = |alpha| e^{i theta} reads Phi = -theta mod 2pi")
    {
        const FockBasis basis(48);
        const auto e = sg_phase_operator(basis);
        for (double theta : {0.3, 1.9, 3.0, 4.4, 6.0}) {
            const complex_t alpha = std::polar(3.0, theta);
            const auto psi = fock::coherent_state(alpha, basis);
            // Oracle: the Poisson-weighted sum of conj(c_{n+1}) c_n from the raw amplitudes.
            complex_t direct = 0.0;
            for (int n = 0; n + 1 < basis.dim(); ++n) {
                direct += std::conj(psi.amplitudes()(n + 1)) * psi.amplitudes()(n);
            }
            double oracle = std::arg(direct);
            if (oracle < 0) {
                oracle += 2 * pi;
            }
            const double measured = phase_expectation(psi, e);
            CHECK(std::abs(measured - oracle) < 1e-12);
            CHECK(std::abs(measured - (2 * pi - theta)) < 1e-6);
        }
    }
    SUBCASE("tan(Phi/2) read-out")
    {
        CHECK(tan_half_phase(0.0) == 0.0);
        CHECK(tan_half_phase(pi / 2) == doctest::Approx(1.0));
        CHECK(tan_half_phase(3 * pi / 2) == doctest::Approx(-1.0));
    }
}

TEST_CASE("unwrap and line fit")
{
    const std::vector<double> wrapped{6.0, 0.1, 0.5, 6.2, 5.9};
    const auto u = unwrap(wrapped);
    CHECK(u[1] == doctest::Approx(0.1 + 2 * pi));
    CHECK(u[3] == doctest::Approx(6.2));
    CHECK(u[4] == doctest::Approx(5.9));

    const auto fit = fit_line({0.0, 1.0, 2.0, 3.0}, {1.0, 3.0, 5.0, 7.0});
    CHECK(fit.slope == doctest::Approx(2.0));
    CHECK(fit.intercept == doctest::Approx(1.0));
    CHECK(fit.max_residual < 1e-14);
    CHECK_THROWS_AS(fit_line({1.0}, {1.0}), Error);
}

TEST_CASE("phase trajectories flow as +omega t on H+ and -omega t on H-")
{
    const DoubledBasis basis(48);
    const auto coherent = fock::coherent_state(std::polar(2.0, 0.4), FockBasis(48));
    const auto times = time_grid(2 * pi, 100);  // step pi/50

    for (double omega : {1.0, 0.6}) {
        const auto plus = phase_trajectory(basis, omega, embed(coherent, basis, Subspace::plus), times);
        const auto minus = phase_trajectory(basis, omega, embed(coherent, basis, Subspace::minus), times);
        CHECK(plus.subspace == Subspace::plus);
        CHECK(minus.subspace == Subspace::minus);
        const auto fit_plus = plus.fit();
        const auto fit_minus = minus.fit();
        CHECK(std::abs(fit_plus.slope - omega) < 1e-3);
        CHECK(std::abs(fit_minus.slope + omega) < 1e-3);
        CHECK(std::abs(fit_plus.slope + fit_minus.slope) < 2e-3);
        for (double v : plus.phase_values) {
            CHECK((v >= 0.0 && v < 2 * pi));
        }
    }

    const auto plus = phase_trajectory(basis, 1.0, embed(coherent, basis, Subspace::plus), times);
    CHECK(std::abs(plus.phase_values.back() - plus.phase_values.front()) < 1e-6);

    SUBCASE("mirror() and embed(minus) agree")
    {
        const auto mirrored = mirror(embed(coherent, basis, Subspace::plus), basis);
        const auto direct = embed(coherent, basis, Subspace::minus);
        CHECK((mirrored.amplitudes() - direct.amplitudes()).norm() == 0.0);
    }
}

TEST_CASE("phase trajectory errors")
{
    const DoubledBasis basis(16);
    const auto coherent = fock::coherent_state(1.0, FockBasis(16));
    const auto plus = embed(coherent, basis, Subspace::plus);
    const auto minus = embed(coherent, basis, Subspace::minus);
    const StateVector straddling(basis.tag(), (plus.amplitudes() + minus.amplitudes()) / std::sqrt(2.0));
    try {
        (void)phase_trajectory(basis, 1.0, straddling, {0.0, 1.0});
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::mixed_support);
    }

    const auto number = embed(fock::number_state(FockBasis(16), 2), basis, Subspace::plus);
    try {
        (void)phase_trajectory(basis, 1.0, number, {0.0, 1.0});
        FAIL("expected throw");
    } catch (const PhaseError& e) {
        CHECK(e.sample_index() == 0);
    }
}
