#include "qtime/phase.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qtime::phase {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double vanishing_phase_amplitude = 1e-12;
constexpr double support_tolerance = 1e-12;

}  // namespace

const char* to_string(Subspace s) noexcept
{
    return s == Subspace::plus ? "plus" : "minus";
}

DoubledBasis::DoubledBasis(int half_dim, bool cyclic) : half_dim_(half_dim), cyclic_(cyclic)
{
    if (half_dim < 2) {
        throw Error(ErrorKind::invalid_basis,
                    "doubled basis needs half_dim >= 2, got " + std::to_string(half_dim));
    }
}

int DoubledBasis::position(int index) const
{
    if (index < min_index() || index > max_index()) {
        throw Error(ErrorKind::invalid_parameter, "index " + std::to_string(index) + " outside the doubled basis");
    }
    return index + half_dim_;
}

OperatorMatrix DoubledBasis::projector(Subspace s) const
{
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(dim(), dim());
    for (int pos = 0; pos < dim(); ++pos) {
        if (subspace_of(index_at(pos)) == s) {
            p(pos, pos) = 1.0;
        }
    }
    return OperatorMatrix(tag(), p, true);
}

OperatorMatrix sg_phase_operator(const FockBasis& basis)
{
    const int dim = basis.dim();
    Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) {
        e(n - 1, n) = 1.0;
    }
    return OperatorMatrix(basis.tag(), e);
}

DefectReport isometry_defect(const OperatorMatrix& op, double tolerance)
{
    const Eigen::MatrixXcd defect =
        op.entries().adjoint() * op.entries() - Eigen::MatrixXcd::Identity(op.dim(), op.dim());

    DefectReport report;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(defect, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& eigenvalues = solver.eigenvalues();
    for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) {
        const double magnitude = std::abs(eigenvalues(k));
        report.norm = std::max(report.norm, magnitude);
        if (magnitude > tolerance) {
            ++report.rank;
        }
    }
    for (int i = 0; i < op.dim(); ++i) {
        if (defect.row(i).cwiseAbs().maxCoeff() > tolerance) {
            report.support.push_back(i);
        }
    }
    return report;
}

OperatorMatrix extended_phase_operator(const DoubledBasis& basis)
{
    if (!basis.cyclic()) {
        throw Error(ErrorKind::unsupported_configuration,
                    "the extended phase operator is only unitary on a cyclic doubled basis");
    }
    Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(basis.dim(), basis.dim());
    for (int n = basis.min_index(); n <= basis.max_index(); ++n) {
        const int target = n == basis.min_index() ? basis.max_index() : n - 1;
        e(basis.position(target), basis.position(n)) = 1.0;
    }
    return OperatorMatrix(basis.tag(), e);
}

OperatorMatrix extended_hamiltonian(const DoubledBasis& basis, double omega)
{
    if (!(omega > 0.0)) {
        throw Error(ErrorKind::invalid_parameter, "omega must be positive, got " + std::to_string(omega));
    }
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(basis.dim(), basis.dim());
    for (int n = basis.min_index(); n <= basis.max_index(); ++n) {
        const double level = n >= 0 ? n + 0.5 : -n - 0.5;
        h(basis.position(n), basis.position(n)) = omega * level;
    }
    return OperatorMatrix(basis.tag(), h, true);
}

StateVector embed(const StateVector& fock_state, const DoubledBasis& basis, Subspace target)
{
    if (fock_state.basis().kind != BasisKind::fock || fock_state.dim() > basis.half_dim()) {
        throw Error(ErrorKind::dimension_mismatch, "embedding needs a Fock state no larger than half_dim");
    }
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(basis.dim());
    for (int k = 0; k < fock_state.dim(); ++k) {
        const int index = target == Subspace::plus ? k : -k - 1;
        amps(basis.position(index)) = fock_state.amplitudes()(k);
    }
    return StateVector(basis.tag(), amps);
}

StateVector mirror(const StateVector& psi, const DoubledBasis& basis)
{
    if (!(psi.basis() == basis.tag())) {
        throw Error(ErrorKind::dimension_mismatch, "mirror: state is not in this doubled basis");
    }
    Eigen::VectorXcd amps(basis.dim());
    for (int n = basis.min_index(); n <= basis.max_index(); ++n) {
        amps(basis.position(-n - 1)) = psi.amplitudes()(basis.position(n));
    }
    return StateVector(basis.tag(), amps);
}

double subspace_weight(const StateVector& psi, const DoubledBasis& basis, Subspace s)
{
    if (!(psi.basis() == basis.tag())) {
        throw Error(ErrorKind::dimension_mismatch, "subspace_weight: state is not in this doubled basis");
    }
    double weight = 0.0;
    for (int pos = 0; pos < basis.dim(); ++pos) {
        if (DoubledBasis::subspace_of(basis.index_at(pos)) == s) {
            weight += std::norm(psi.amplitudes()(pos));
        }
    }
    return weight;
}

double phase_expectation(const StateVector& psi, const OperatorMatrix& shift)
{
    const complex_t raising = fock::expectation(shift.adjoint(), psi);
    if (std::abs(raising) <= vanishing_phase_amplitude) {
        throw PhaseError("phase undefined: |<E>| = " + std::to_string(std::abs(raising)));
    }
    double phase = std::arg(raising);
    if (phase < 0.0) {
        phase += two_pi;
    }
    return phase >= two_pi ? 0.0 : phase;
}

double tan_half_phase(double phase)
{
    return std::tan(0.5 * phase);
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2) {
        throw Error(ErrorKind::invalid_parameter, "line fit needs at least two paired samples");
    }
    const double n = static_cast<double>(x.size());
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mean_x += x[i];
        mean_y += y[i];
    }
    mean_x /= n;
    mean_y /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mean_x) * (x[i] - mean_x);
        sxy += (x[i] - mean_x) * (y[i] - mean_y);
    }
    if (sxx == 0.0) {
        throw Error(ErrorKind::invalid_parameter, "line fit needs distinct abscissae");
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        fit.max_residual = std::max(fit.max_residual, std::abs(y[i] - fit.intercept - fit.slope * x[i]));
    }
    return fit;
}

std::vector<double> unwrap(const std::vector<double>& phases)
{
    std::vector<double> out(phases);
    double offset = 0.0;
    for (std::size_t i = 1; i < phases.size(); ++i) {
        const double jump = phases[i] - phases[i - 1];
        if (jump > std::numbers::pi) {
            offset -= two_pi;
        } else if (jump < -std::numbers::pi) {
            offset += two_pi;
        }
        out[i] = phases[i] + offset;
    }
    return out;
}

PhaseTrajectory phase_trajectory(const DoubledBasis& basis, double omega, const StateVector& psi0,
                                 const std::vector<double>& times)
{
    if (!(psi0.basis() == basis.tag())) {
        throw Error(ErrorKind::dimension_mismatch, "phase_trajectory: initial state is not in this doubled basis");
    }
    const double plus = subspace_weight(psi0, basis, Subspace::plus);
    const double minus = subspace_weight(psi0, basis, Subspace::minus);
    const double leak = support_tolerance * support_tolerance;
    if (plus > leak && minus > leak) {
        throw Error(ErrorKind::mixed_support,
                    "initial state straddles H+ and H- (weights " + std::to_string(plus) + ", " +
                        std::to_string(minus) + ")");
    }

    const OperatorMatrix hamiltonian = extended_hamiltonian(basis, omega);
    const OperatorMatrix shift = extended_phase_operator(basis);

    PhaseTrajectory trajectory;
    trajectory.subspace = plus >= minus ? Subspace::plus : Subspace::minus;
    trajectory.times = times;
    trajectory.phase_values.reserve(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        const StateVector psi = fock::evolve(hamiltonian, psi0, times[k]);
        try {
            trajectory.phase_values.push_back(phase_expectation(psi, shift));
        } catch (const PhaseError& e) {
            throw PhaseError(std::string(e.what()) + " at sample " + std::to_string(k) + " (t = " +
                                 std::to_string(times[k]) + ")",
                             static_cast<long>(k));
        }
    }
    return trajectory;
}

}  // namespace qtime::phase
