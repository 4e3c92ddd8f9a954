#pragma once

// Hidden-variable polarizer-pair model. A single polarizer passes a photon
// whose polarization deviates by lambda from its axis with probability
// p1(lambda), period pi. A pair at relative angle alpha passes
//   m(alpha) = integral over one period of p1(lambda) p1(lambda - alpha).

#include <optional>
#include <vector>

#include "qtime/errors.hpp"

namespace qtime::polarizer {

/// p1 sampled at lambda_j = -pi/2 + j pi/M, optionally carrying the even
/// cosine series b0 + sum_k b_k cos(2k lambda) it was sampled from.
class TransmissionProfile {
public:
    static TransmissionProfile from_samples(std::vector<double> samples);
    static TransmissionProfile from_fourier(std::vector<double> coefficients, int grid_size);

    int grid_size() const noexcept { return static_cast<int>(samples_.size()); }
    double spacing() const noexcept;
    double lambda(int j) const noexcept;

    const std::vector<double>& samples() const noexcept { return samples_; }
    const std::optional<std::vector<double>>& fourier() const noexcept { return fourier_; }

    /// p1 at an arbitrary angle: the cosine series when present, otherwise
    /// periodic linear interpolation of the samples.
    double evaluate(double lambda) const;

    /// Samples of p1(lambda_j - alpha).
    std::vector<double> shifted(double alpha) const;

private:
    TransmissionProfile(std::vector<double> samples, std::optional<std::vector<double>> fourier);

    std::vector<double> samples_;
    std::optional<std::vector<double>> fourier_;
};

/// Periodic shift of a uniformly sampled, period-pi sequence: values at
/// lambda_j - alpha. Whole-sample shifts rotate indices; anything else uses
/// trigonometric interpolation, exact for band-limited sequences.
std::vector<double> circular_shift(const std::vector<double>& samples, double alpha);

/// Sum of the cosine series at lambda.
double cosine_series(const std::vector<double>& coefficients, double lambda);

/// Trapezoid-rule circular correlation of p1 with itself at lag alpha.
double pair_transmission(const TransmissionProfile& p1, double alpha);

/// Closed-form correlation of b0 + sum b_k cos 2k lambda:
/// pi b0^2 + (pi/2) sum b_k^2 cos 2k alpha.
double fourier_pair_transmission(const std::vector<double>& coefficients, double alpha);

/// (1 - eps) cos^2 alpha + eps, for 0 <= eps < 1.
double malus_target(double epsilon, double alpha);

TransmissionProfile belinfante_profile(int grid_size);

/// n points evenly covering [-pi/2, pi/2] inclusive; a single point sits at 0.
std::vector<double> angle_grid(int n);

struct PairCurve {
    std::vector<double> alphas;
    std::vector<double> values;
};

PairCurve pair_curve(const TransmissionProfile& p1, const std::vector<double>& alphas);

/// (b0, b1) for which the two-mode correlation equals the Malus curve exactly.
std::vector<double> two_mode_malus_coefficients(double epsilon);

/// The exact two-mode solution with its samples clipped into [0, 1].
TransmissionProfile clipped_two_mode_profile(double epsilon, int grid_size);

struct FitOptions {
    double epsilon = 0.02;
    int n_modes = 6;
    int grid_size = 512;
    int n_angles = 181;
    int max_iter = 50000;
    double tol = 1e-12;
};

struct FitResult {
    TransmissionProfile profile;
    std::vector<double> coefficients;  // profile = clip(sum b_k cos 2k lambda) on the grid
    double rms_residual = 0.0;
    double max_residual = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> objective_history;
};

/// Projected-gradient least squares between m(alpha) and the Malus target
/// over the angle grid. Starts from the clipped two-mode profile; each step
/// is accepted only if the objective does not increase.
FitResult fit_profile(const FitOptions& options);

struct CurveRow {
    double alpha;
    double m;
    double malus;
    double residual;  // malus - m
};

/// Table of m(alpha), the Malus target and their difference; `normalize`
/// divides m by m(0) first.
std::vector<CurveRow> curve_report(const TransmissionProfile& p1, double epsilon,
                                   const std::vector<double>& alphas, bool normalize = false);

}  // namespace qtime::polarizer
