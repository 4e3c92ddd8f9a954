#pragma once

// Free relative motion on a periodic 1-D grid (hbar = 1) and the dilation
// generator R = (qp + pq)/2, whose expectation grows at rate 2<H> and whose
// sign separates incoming from outgoing packets.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qtime/errors.hpp"

namespace qtime::dilation {

/// Uniform grid on [-L, L) with n_points samples; momenta follow the FFT ordering.
class SpatialGrid {
public:
    SpatialGrid(int n_points, double extent, double mass = 1.0);

    int n_points() const noexcept { return n_points_; }
    double extent() const noexcept { return extent_; }
    double mass() const noexcept { return mass_; }
    double spacing() const noexcept { return 2.0 * extent_ / n_points_; }
    double max_momentum() const noexcept;

    double position(int j) const noexcept { return -extent_ + j * spacing(); }
    double momentum(int j) const noexcept;

    bool operator==(const SpatialGrid&) const = default;

private:
    int n_points_;
    double extent_;
    double mass_;
};

class WavepacketGrid {
public:
    /// Checks the discrete norm (sum |psi|^2 dx) against 1 within 1e-10.
    WavepacketGrid(SpatialGrid grid, Eigen::VectorXcd amplitudes);

    const SpatialGrid& grid() const noexcept { return grid_; }
    const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }

    double norm() const;
    /// Largest edge |psi| divided by peak |psi|.
    double edge_ratio() const;

private:
    SpatialGrid grid_;
    Eigen::VectorXcd amplitudes_;
};

constexpr double edge_ratio_limit = 1e-8;

WavepacketGrid gaussian_packet(const SpatialGrid& grid, double q0, double p0, double sigma);

/// exp(-i p^2 t / 2m) applied in the momentum representation.
WavepacketGrid free_evolve(const WavepacketGrid& packet, double t);

double q_expectation(const WavepacketGrid& packet);
double p_expectation(const WavepacketGrid& packet);
double h_expectation(const WavepacketGrid& packet);
double r_expectation(const WavepacketGrid& packet);

enum class Label { in, interaction, out };

const char* to_string(Label label) noexcept;

Label classify(const WavepacketGrid& packet, double interaction_halfwidth);

struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<double> r_values;
    std::vector<double> h_values;
    std::vector<double> q_values;
    std::vector<double> p_values;
    std::vector<double> norms;
    std::vector<Label> labels;
};

/// True when labels never step backwards in the order in -> interaction -> out.
bool labels_monotone(const std::vector<Label>& labels);

TrajectoryRecord trace_trajectory(const WavepacketGrid& packet, const std::vector<double>& times,
                                  double interaction_halfwidth);

}  // namespace qtime::dilation
