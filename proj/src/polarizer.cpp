#include "qtime/polarizer.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

namespace qtime::polarizer {

namespace {

using std::numbers::pi;
using cvec = std::vector<std::complex<double>>;

constexpr double box_slack = 1e-12;
constexpr int min_grid_size = 4;

void require_box(std::vector<double>& samples)
{
    for (double& s : samples) {
        if (!(s >= -box_slack && s <= 1.0 + box_slack)) {
            throw Error(ErrorKind::invalid_parameter,
                        "transmission probability outside [0, 1]: " + std::to_string(s));
        }
        s = std::clamp(s, 0.0, 1.0);
    }
}

int signed_frequency(int k, int m)
{
    return k <= (m - 1) / 2 ? k : k - m;
}

cvec dft(const std::vector<double>& samples)
{
    Eigen::FFT<double> fft;
    cvec in(samples.begin(), samples.end());
    cvec out;
    fft.fwd(out, in);
    return out;
}

// Real parts of the inverse DFT (normalized by 1/M).
std::vector<double> idft_real(const cvec& spectrum)
{
    Eigen::FFT<double> fft;
    cvec out;
    fft.inv(out, spectrum);
    std::vector<double> real(out.size());
    std::transform(out.begin(), out.end(), real.begin(), [](const auto& z) { return z.real(); });
    return real;
}

void check_epsilon(double epsilon)
{
    if (!(epsilon >= 0.0 && epsilon < 1.0)) {
        throw Error(ErrorKind::invalid_parameter, "epsilon must lie in [0, 1), got " + std::to_string(epsilon));
    }
}

// Evaluates m(alpha) for a whole angle grid from the sample power spectrum,
// and the gradient of the mean-squared Malus residual with respect to the
// samples. m(alpha) = pi [P0 + 2 sum_{0<k<M/2} Pk cos 2k alpha + P_{M/2} cos M alpha].
class SpectralObjective {
public:
    SpectralObjective(int grid_size, std::vector<double> alphas, std::vector<double> targets)
        : m_(grid_size), half_(grid_size / 2), alphas_(std::move(alphas)), targets_(std::move(targets)),
          basis_(static_cast<Eigen::Index>(alphas_.size()), half_ + 1)
    {
        for (std::size_t i = 0; i < alphas_.size(); ++i) {
            for (int k = 0; k <= half_; ++k) {
                const double weight = (k == 0 || k == half_) ? 1.0 : 2.0;
                basis_(static_cast<Eigen::Index>(i), k) = pi * weight * std::cos(2.0 * k * alphas_[i]);
            }
        }
    }

    double value(const std::vector<double>& samples, std::vector<double>* gradient = nullptr) const
    {
        const cvec spectrum = dft(samples);
        Eigen::VectorXd power(half_ + 1);
        for (int k = 0; k <= half_; ++k) {
            power(k) = std::norm(spectrum[k]) / (static_cast<double>(m_) * m_);
        }
        const Eigen::VectorXd curve = basis_ * power;
        Eigen::VectorXd residual(curve.size());
        for (Eigen::Index i = 0; i < curve.size(); ++i) {
            residual(i) = curve(i) - targets_[static_cast<std::size_t>(i)];
        }
        const double n = static_cast<double>(residual.size());
        if (gradient != nullptr) {
            // d f / d P_k, then chain through P_k = |c_k|^2 with c_k = DFT_k / M.
            const Eigen::VectorXd d_power = (2.0 / n) * (basis_.transpose() * residual);
            cvec weighted(static_cast<std::size_t>(m_), {0.0, 0.0});
            for (int k = 0; k <= half_; ++k) {
                weighted[k] = d_power(k) * spectrum[k] / static_cast<double>(m_);
            }
            const std::vector<double> back = idft_real(weighted);
            gradient->resize(back.size());
            for (std::size_t j = 0; j < back.size(); ++j) {
                (*gradient)[j] = 2.0 * back[j];
            }
        }
        return residual.squaredNorm() / n;
    }

private:
    int m_;
    int half_;
    std::vector<double> alphas_;
    std::vector<double> targets_;
    Eigen::MatrixXd basis_;
};

}  // namespace

TransmissionProfile::TransmissionProfile(std::vector<double> samples, std::optional<std::vector<double>> fourier)
    : samples_(std::move(samples)), fourier_(std::move(fourier))
{
}

TransmissionProfile TransmissionProfile::from_samples(std::vector<double> samples)
{
    if (samples.size() < static_cast<std::size_t>(min_grid_size)) {
        throw Error(ErrorKind::invalid_parameter,
                    "a transmission profile needs at least " + std::to_string(min_grid_size) + " samples");
    }
    require_box(samples);
    return TransmissionProfile(std::move(samples), std::nullopt);
}

TransmissionProfile TransmissionProfile::from_fourier(std::vector<double> coefficients, int grid_size)
{
    if (coefficients.empty()) {
        throw Error(ErrorKind::invalid_parameter, "cosine series needs at least one coefficient");
    }
    const int max_harmonic = static_cast<int>(coefficients.size()) - 1;
    if (grid_size < min_grid_size || grid_size <= 2 * max_harmonic) {
        throw Error(ErrorKind::invalid_parameter,
                    "grid of " + std::to_string(grid_size) + " samples cannot resolve harmonic " +
                        std::to_string(max_harmonic));
    }
    std::vector<double> samples(static_cast<std::size_t>(grid_size));
    for (int j = 0; j < grid_size; ++j) {
        samples[j] = cosine_series(coefficients, -0.5 * pi + j * pi / grid_size);
    }
    require_box(samples);
    return TransmissionProfile(std::move(samples), std::move(coefficients));
}

double TransmissionProfile::spacing() const noexcept
{
    return pi / grid_size();
}

double TransmissionProfile::lambda(int j) const noexcept
{
    return -0.5 * pi + j * spacing();
}

double TransmissionProfile::evaluate(double lambda) const
{
    if (fourier_) {
        return cosine_series(*fourier_, lambda);
    }
    const int m = grid_size();
    double u = (lambda + 0.5 * pi) / spacing();
    u -= m * std::floor(u / m);
    const int lo = static_cast<int>(u) % m;
    const int hi = (lo + 1) % m;
    const double frac = u - std::floor(u);
    return (1.0 - frac) * samples_[lo] + frac * samples_[hi];
}

std::vector<double> TransmissionProfile::shifted(double alpha) const
{
    return circular_shift(samples_, alpha);
}

std::vector<double> circular_shift(const std::vector<double>& samples, double alpha)
{
    const int m = static_cast<int>(samples.size());
    const double steps = alpha * m / pi;
    const double whole = std::round(steps);
    if (std::abs(steps - whole) <= 1e-12 * std::max(1.0, std::abs(steps))) {
        long offset = static_cast<long>(whole) % m;
        if (offset < 0) {
            offset += m;
        }
        std::vector<double> out(samples.size());
        for (int j = 0; j < m; ++j) {
            out[j] = samples[static_cast<std::size_t>((j - offset + m) % m)];
        }
        return out;
    }

    // Period pi in lambda is period 2 pi in theta = 2 lambda; the shift is 2 alpha.
    cvec spectrum = dft(samples);
    for (int k = 0; k < m; ++k) {
        if (m % 2 == 0 && k == m / 2) {
            spectrum[k] *= std::cos(m * alpha);
        } else {
            spectrum[k] *= std::polar(1.0, -2.0 * signed_frequency(k, m) * alpha);
        }
    }
    return idft_real(spectrum);
}

double cosine_series(const std::vector<double>& coefficients, double lambda)
{
    double value = 0.0;
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
        value += coefficients[k] * std::cos(2.0 * static_cast<double>(k) * lambda);
    }
    return value;
}

double pair_transmission(const TransmissionProfile& p1, double alpha)
{
    const std::vector<double> moved = p1.shifted(alpha);
    double sum = 0.0;
    for (int j = 0; j < p1.grid_size(); ++j) {
        sum += p1.samples()[j] * moved[j];
    }
    return sum * p1.spacing();
}

double fourier_pair_transmission(const std::vector<double>& coefficients, double alpha)
{
    if (coefficients.empty()) {
        return 0.0;
    }
    double value = pi * coefficients[0] * coefficients[0];
    for (std::size_t k = 1; k < coefficients.size(); ++k) {
        value += 0.5 * pi * coefficients[k] * coefficients[k] * std::cos(2.0 * static_cast<double>(k) * alpha);
    }
    return value;
}

double malus_target(double epsilon, double alpha)
{
    check_epsilon(epsilon);
    const double c = std::cos(alpha);
    return (1.0 - epsilon) * c * c + epsilon;
}

TransmissionProfile belinfante_profile(int grid_size)
{
    if (grid_size < 64) {
        throw Error(ErrorKind::invalid_parameter, "Belinfante profile needs grid_size >= 64");
    }
    return TransmissionProfile::from_fourier({0.5, 0.5}, grid_size);
}

std::vector<double> angle_grid(int n)
{
    if (n < 1) {
        throw Error(ErrorKind::invalid_parameter, "angle grid needs at least one point");
    }
    if (n == 1) {
        return {0.0};
    }
    std::vector<double> alphas(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        alphas[i] = -0.5 * pi + i * pi / (n - 1);
    }
    return alphas;
}

PairCurve pair_curve(const TransmissionProfile& p1, const std::vector<double>& alphas)
{
    PairCurve curve{alphas, {}};
    curve.values.reserve(alphas.size());
    for (double alpha : alphas) {
        curve.values.push_back(pair_transmission(p1, alpha));
    }
    return curve;
}

std::vector<double> two_mode_malus_coefficients(double epsilon)
{
    check_epsilon(epsilon);
    return {std::sqrt((1.0 + epsilon) / (2.0 * pi)), std::sqrt((1.0 - epsilon) / pi)};
}

TransmissionProfile clipped_two_mode_profile(double epsilon, int grid_size)
{
    const std::vector<double> b = two_mode_malus_coefficients(epsilon);
    std::vector<double> samples(static_cast<std::size_t>(grid_size));
    for (int j = 0; j < grid_size; ++j) {
        samples[j] = std::clamp(cosine_series(b, -0.5 * pi + j * pi / grid_size), 0.0, 1.0);
    }
    return TransmissionProfile::from_samples(std::move(samples));
}

FitResult fit_profile(const FitOptions& options)
{
    check_epsilon(options.epsilon);
    if (options.n_modes < 2) {
        throw Error(ErrorKind::invalid_parameter, "fit needs at least 2 modes");
    }
    if (options.grid_size < 8 * options.n_modes || options.grid_size % 2 != 0) {
        throw Error(ErrorKind::invalid_parameter, "fit grid must be even and hold >= 8 samples per mode");
    }
    if (options.max_iter < 1 || !(options.tol > 0.0) || options.n_angles < 2) {
        throw Error(ErrorKind::invalid_parameter, "fit needs max_iter >= 1, tol > 0 and >= 2 angles");
    }

    const int m = options.grid_size;
    const int modes = options.n_modes;
    Eigen::MatrixXd synthesis(m, modes);
    for (int j = 0; j < m; ++j) {
        for (int k = 0; k < modes; ++k) {
            synthesis(j, k) = std::cos(2.0 * k * (-0.5 * pi + j * pi / m));
        }
    }

    const std::vector<double> alphas = angle_grid(options.n_angles);
    std::vector<double> targets;
    targets.reserve(alphas.size());
    for (double alpha : alphas) {
        targets.push_back(malus_target(options.epsilon, alpha));
    }
    const SpectralObjective objective(m, alphas, targets);

    auto project = [&](const Eigen::VectorXd& coeffs, Eigen::VectorXd& raw) {
        raw = synthesis * coeffs;
        std::vector<double> samples(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j) {
            samples[j] = std::clamp(raw(j), 0.0, 1.0);
        }
        return samples;
    };

    Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(modes);
    const std::vector<double> start = two_mode_malus_coefficients(options.epsilon);
    coeffs(0) = start[0];
    coeffs(1) = start[1];

    Eigen::VectorXd raw;
    std::vector<double> samples = project(coeffs, raw);
    std::vector<double> sample_gradient;
    double current = objective.value(samples, &sample_gradient);

    FitResult result{TransmissionProfile::from_samples(samples), {}, 0.0, 0.0, 0, false, {current}};

    double step = 1.0;
    for (int iter = 0; iter < options.max_iter; ++iter) {
        // Clipped samples do not move with the coefficients.
        Eigen::VectorXd active_gradient(m);
        for (int j = 0; j < m; ++j) {
            active_gradient(j) = (raw(j) > 0.0 && raw(j) < 1.0) ? sample_gradient[j] : 0.0;
        }
        const Eigen::VectorXd gradient = synthesis.transpose() * active_gradient;
        if (gradient.norm() <= options.tol) {
            result.converged = true;
            break;
        }

        bool accepted = false;
        Eigen::VectorXd trial_raw;
        std::vector<double> trial_samples;
        std::vector<double> trial_gradient;
        double trial_value = current;
        while (step > 1e-16) {
            const Eigen::VectorXd trial = coeffs - step * gradient;
            trial_samples = project(trial, trial_raw);
            trial_value = objective.value(trial_samples, &trial_gradient);
            if (trial_value <= current) {
                coeffs = trial;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        result.iterations = iter + 1;
        if (!accepted) {
            // No descent left along the projected gradient.
            result.converged = true;
            break;
        }

        const double decrease = current - trial_value;
        raw = std::move(trial_raw);
        samples = std::move(trial_samples);
        sample_gradient = std::move(trial_gradient);
        current = trial_value;
        result.objective_history.push_back(current);
        step *= 2.0;
        if (decrease <= options.tol * std::max(current, 1e-300)) {
            result.converged = true;
            break;
        }
    }

    bool clipped = false;
    for (int j = 0; j < m; ++j) {
        clipped = clipped || raw(j) < 0.0 || raw(j) > 1.0;
    }
    result.coefficients.assign(coeffs.data(), coeffs.data() + coeffs.size());
    result.profile = clipped ? TransmissionProfile::from_samples(samples)
                             : TransmissionProfile::from_fourier(result.coefficients, m);

    double sum_sq = 0.0;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        const double r = targets[i] - pair_transmission(result.profile, alphas[i]);
        sum_sq += r * r;
        result.max_residual = std::max(result.max_residual, std::abs(r));
    }
    result.rms_residual = std::sqrt(sum_sq / static_cast<double>(alphas.size()));
    return result;
}

std::vector<CurveRow> curve_report(const TransmissionProfile& p1, double epsilon, const std::vector<double>& alphas,
                                   bool normalize)
{
    check_epsilon(epsilon);
    const double scale = normalize ? pair_transmission(p1, 0.0) : 1.0;
    if (!(scale > 0.0)) {
        throw Error(ErrorKind::invalid_parameter, "cannot normalize a profile that transmits nothing");
    }
    std::vector<CurveRow> rows;
    rows.reserve(alphas.size());
    for (double alpha : alphas) {
        const double m = pair_transmission(p1, alpha) / scale;
        const double target = malus_target(epsilon, alpha);
        rows.push_back({alpha, m, target, target - m});
    }
    return rows;
}

}  // namespace qtime::polarizer
