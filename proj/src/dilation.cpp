#include "qtime/dilation.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace qtime::dilation {

namespace {

using cvec = std::vector<std::complex<double>>;

constexpr double norm_tolerance = 1e-10;
constexpr double support_sigmas = 6.0;

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

bool power_of_two(int n)
{
    return n > 0 && (n & (n - 1)) == 0;
}

cvec to_std(const Eigen::VectorXcd& v)
{
    return cvec(v.data(), v.data() + v.size());
}

Eigen::VectorXcd to_eigen(const cvec& v)
{
    return Eigen::Map<const Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// A fresh FFT object per call keeps every transform re-entrant.
cvec forward(const Eigen::VectorXcd& psi)
{
    Eigen::FFT<double> fft;
    cvec in = to_std(psi);
    cvec out;
    fft.fwd(out, in);
    return out;
}

Eigen::VectorXcd inverse(const cvec& phi)
{
    Eigen::FFT<double> fft;
    cvec out;
    fft.inv(out, phi);
    return to_eigen(out);
}

// Returns (sum k^power |phi_k|^2) / (sum |phi_k|^2).
double momentum_moment(const WavepacketGrid& packet, int power)
{
    const cvec phi = forward(packet.amplitudes());
    double weighted = 0.0;
    double total = 0.0;
    for (int j = 0; j < packet.grid().n_points(); ++j) {
        const double w = std::norm(phi[j]);
        weighted += std::pow(packet.grid().momentum(j), power) * w;
        total += w;
    }
    return weighted / total;
}

void check_edges(const WavepacketGrid& packet, double t)
{
    const double ratio = packet.edge_ratio();
    if (!(ratio < edge_ratio_limit)) {
        throw BoundaryError("packet reaches the grid edge at t = " + fmt(t) + " (edge/peak = " + fmt(ratio) + ")",
                            t);
    }
}

}  // namespace

SpatialGrid::SpatialGrid(int n_points, double extent, double mass)
    : n_points_(n_points), extent_(extent), mass_(mass)
{
    if (!power_of_two(n_points) || n_points < 256) {
        throw Error(ErrorKind::invalid_parameter,
                    "grid needs a power-of-two point count >= 256, got " + std::to_string(n_points));
    }
    if (!(extent > 0.0) || !(mass > 0.0)) {
        throw Error(ErrorKind::invalid_parameter, "grid extent and mass must be positive");
    }
}

double SpatialGrid::max_momentum() const noexcept
{
    return std::numbers::pi / spacing();
}

double SpatialGrid::momentum(int j) const noexcept
{
    const int signed_index = j < n_points_ / 2 ? j : j - n_points_;
    return std::numbers::pi / extent_ * signed_index;
}

WavepacketGrid::WavepacketGrid(SpatialGrid grid, Eigen::VectorXcd amplitudes)
    : grid_(grid), amplitudes_(std::move(amplitudes))
{
    if (amplitudes_.size() != grid_.n_points()) {
        throw Error(ErrorKind::dimension_mismatch, "wavepacket length does not match its grid");
    }
    if (std::abs(norm() - 1.0) > norm_tolerance) {
        throw Error(ErrorKind::not_normalized, "wavepacket norm is " + fmt(norm()));
    }
}

double WavepacketGrid::norm() const
{
    return std::sqrt(amplitudes_.squaredNorm() * grid_.spacing());
}

double WavepacketGrid::edge_ratio() const
{
    const double peak = amplitudes_.cwiseAbs().maxCoeff();
    const double edge = std::max(std::abs(amplitudes_(0)), std::abs(amplitudes_(amplitudes_.size() - 1)));
    return edge / peak;
}

WavepacketGrid gaussian_packet(const SpatialGrid& grid, double q0, double p0, double sigma)
{
    if (!(sigma > 0.0)) {
        throw Error(ErrorKind::invalid_parameter, "packet width must be positive");
    }
    if (!(std::abs(q0) + support_sigmas * sigma < grid.extent())) {
        throw BoundaryError("packet |q0| + 6 sigma = " + fmt(std::abs(q0) + support_sigmas * sigma) +
                                " does not fit inside L = " + fmt(grid.extent()),
                            0.0);
    }
    const double momentum_width = 0.5 / sigma;
    if (!(std::abs(p0) + support_sigmas * momentum_width < grid.max_momentum())) {
        throw Error(ErrorKind::momentum_aliasing, "packet momentum support exceeds the grid cutoff " +
                                                      fmt(grid.max_momentum()));
    }

    Eigen::VectorXcd amps(grid.n_points());
    for (int j = 0; j < grid.n_points(); ++j) {
        const double x = grid.position(j);
        const double envelope = std::exp(-(x - q0) * (x - q0) / (4.0 * sigma * sigma));
        amps(j) = envelope * std::polar(1.0, p0 * x);
    }
    amps /= std::sqrt(amps.squaredNorm() * grid.spacing());
    WavepacketGrid packet(grid, amps);
    check_edges(packet, 0.0);
    return packet;
}

WavepacketGrid free_evolve(const WavepacketGrid& packet, double t)
{
    if (t == 0.0) {
        return packet;
    }
    const SpatialGrid& grid = packet.grid();
    cvec phi = forward(packet.amplitudes());
    for (int j = 0; j < grid.n_points(); ++j) {
        const double k = grid.momentum(j);
        phi[j] *= std::polar(1.0, -k * k * t / (2.0 * grid.mass()));
    }
    WavepacketGrid evolved(grid, inverse(phi));
    check_edges(evolved, t);
    return evolved;
}

double q_expectation(const WavepacketGrid& packet)
{
    const SpatialGrid& grid = packet.grid();
    double total = 0.0;
    for (int j = 0; j < grid.n_points(); ++j) {
        total += grid.position(j) * std::norm(packet.amplitudes()(j));
    }
    return total * grid.spacing();
}

double p_expectation(const WavepacketGrid& packet)
{
    return momentum_moment(packet, 1);
}

double h_expectation(const WavepacketGrid& packet)
{
    return momentum_moment(packet, 2) / (2.0 * packet.grid().mass());
}

double r_expectation(const WavepacketGrid& packet)
{
    const SpatialGrid& grid = packet.grid();
    cvec phi = forward(packet.amplitudes());
    for (int j = 0; j < grid.n_points(); ++j) {
        phi[j] *= grid.momentum(j);
    }
    const Eigen::VectorXcd p_psi = inverse(phi);
    // Re<psi|q p|psi> equals <(qp + pq)/2> for hermitian q and p.
    double total = 0.0;
    for (int j = 0; j < grid.n_points(); ++j) {
        total += (std::conj(packet.amplitudes()(j)) * grid.position(j) * p_psi(j)).real();
    }
    return total * grid.spacing();
}

const char* to_string(Label label) noexcept
{
    switch (label) {
    case Label::in: return "in";
    case Label::interaction: return "interaction";
    case Label::out: return "out";
    }
    return "unknown";
}

Label classify(const WavepacketGrid& packet, double interaction_halfwidth)
{
    if (std::abs(q_expectation(packet)) < interaction_halfwidth) {
        return Label::interaction;
    }
    return r_expectation(packet) < 0.0 ? Label::in : Label::out;
}

bool labels_monotone(const std::vector<Label>& labels)
{
    for (std::size_t i = 1; i < labels.size(); ++i) {
        if (static_cast<int>(labels[i]) < static_cast<int>(labels[i - 1])) {
            return false;
        }
    }
    return true;
}

TrajectoryRecord trace_trajectory(const WavepacketGrid& packet, const std::vector<double>& times,
                                  double interaction_halfwidth)
{
    if (!(interaction_halfwidth > 0.0)) {
        throw Error(ErrorKind::invalid_parameter, "interaction half-width must be positive");
    }
    TrajectoryRecord record;
    record.times = times;
    for (double t : times) {
        const WavepacketGrid psi = free_evolve(packet, t);
        record.r_values.push_back(r_expectation(psi));
        record.h_values.push_back(h_expectation(psi));
        record.q_values.push_back(q_expectation(psi));
        record.p_values.push_back(p_expectation(psi));
        record.norms.push_back(psi.norm());
        record.labels.push_back(classify(psi, interaction_halfwidth));
    }
    return record;
}

}  // namespace qtime::dilation
