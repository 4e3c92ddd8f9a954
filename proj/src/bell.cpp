#include "qtime/bell.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace qtime::bell {

namespace {

using std::numbers::pi;

double reduce(double angle)
{
    double r = std::fmod(angle, pi);
    if (r < 0.0) {
        r += pi;
    }
    return r >= pi ? 0.0 : r;
}

}  // namespace

ChshSetting ChshSetting::canonical()
{
    return {0.0, pi / 4.0, pi / 8.0, 3.0 * pi / 8.0};
}

ChshSetting ChshSetting::reduced() const
{
    return {reduce(a), reduce(a_prime), reduce(b), reduce(b_prime)};
}

CorrelationEstimate hv_correlation(const TransmissionProfile& p1, double a, double b)
{
    const std::vector<double> at_a = p1.shifted(a);
    const std::vector<double> at_b = p1.shifted(b);
    double sum = 0.0;
    for (std::size_t j = 0; j < at_a.size(); ++j) {
        sum += (2.0 * at_a[j] - 1.0) * (2.0 * at_b[j] - 1.0);
    }
    // (1/pi) * trapezoid weight (pi/M).
    return {sum / static_cast<double>(at_a.size()), 0.0, 0};
}

CorrelationEstimate qm_correlation(double a, double b)
{
    return {std::cos(2.0 * (a - b)), 0.0, 0};
}

double chsh(const ChshCorrelations& c)
{
    return c[0].value - c[1].value + c[2].value + c[3].value;
}

double chsh_std_error(const ChshCorrelations& c)
{
    double var = 0.0;
    for (const auto& e : c) {
        var += e.std_error * e.std_error;
    }
    return std::sqrt(var);
}

CorrelationEstimate mc_simulate(const TransmissionProfile& p1, double a, double b, long n_events,
                                std::uint64_t seed)
{
    if (n_events < 1000) {
        throw Error(ErrorKind::invalid_parameter, "Monte Carlo needs at least 1000 events");
    }
    if (p1.samples().empty()) {
        throw Error(ErrorKind::invalid_parameter, "empty transmission profile");
    }
    Rng rng(seed);
    long agree = 0;
    for (long i = 0; i < n_events; ++i) {
        const double lambda = rng.uniform(-0.5 * pi, 0.5 * pi);
        const bool pass_a = rng.uniform() < p1.evaluate(lambda - a);
        const bool pass_b = rng.uniform() < p1.evaluate(lambda - b);
        agree += pass_a == pass_b ? 1 : 0;
    }
    const double n = static_cast<double>(n_events);
    const double mean = (2.0 * static_cast<double>(agree) - n) / n;
    const double variance = std::max(0.0, 1.0 - mean * mean) * n / (n - 1.0);
    return {mean, std::sqrt(variance / n), n_events};
}

TransmissionProfile random_profile(Rng& rng, int n_modes, int grid_size, bool deterministic)
{
    if (n_modes < 1) {
        throw Error(ErrorKind::invalid_parameter, "random profile needs at least one mode");
    }
    std::vector<double> coeffs(static_cast<std::size_t>(n_modes));
    for (auto& c : coeffs) {
        c = rng.normal();
    }
    std::vector<double> raw(static_cast<std::size_t>(grid_size));
    for (int j = 0; j < grid_size; ++j) {
        raw[j] = polarizer::cosine_series(coeffs, -0.5 * pi + j * pi / grid_size);
    }
    if (deterministic) {
        const double threshold = rng.uniform(-0.5, 0.5) * (*std::max_element(raw.begin(), raw.end()));
        for (double& r : raw) {
            r = r > threshold ? 1.0 : 0.0;
        }
        return TransmissionProfile::from_samples(std::move(raw));
    }

    double lo = rng.uniform();
    double hi = rng.uniform();
    if (lo > hi) {
        std::swap(lo, hi);
    }
    const auto [min_it, max_it] = std::minmax_element(raw.begin(), raw.end());
    const double span = *max_it - *min_it;
    // An affine map keeps the profile a cosine series of the same order.
    std::vector<double> mapped = coeffs;
    const double scale = span > 0.0 ? (hi - lo) / span : 0.0;
    for (auto& c : mapped) {
        c *= scale;
    }
    mapped[0] += lo - scale * *min_it;
    if (2 * (n_modes - 1) < grid_size) {
        return TransmissionProfile::from_fourier(std::move(mapped), grid_size);
    }
    for (double& r : raw) {
        r = lo + scale * (r - *min_it);
    }
    return TransmissionProfile::from_samples(std::move(raw));
}

SweepResult local_bound_sweep(int n_profiles, int n_modes, std::uint64_t seed, int grid_size)
{
    if (n_profiles < 100) {
        throw Error(ErrorKind::invalid_parameter, "bound sweep needs at least 100 profiles");
    }
    if (grid_size % 8 != 0 || grid_size < 64) {
        throw Error(ErrorKind::invalid_parameter, "bound sweep grid must be a multiple of 8 and >= 64");
    }
    const ChshSetting setting = ChshSetting::canonical();
    Rng rng(seed);
    SweepResult result;
    result.n_profiles = n_profiles;
    result.s_values.reserve(static_cast<std::size_t>(n_profiles));
    for (int i = 0; i < n_profiles; ++i) {
        const bool deterministic = i % 10 == 9;
        const TransmissionProfile profile = random_profile(rng, n_modes, grid_size, deterministic);
        result.n_deterministic += deterministic ? 1 : 0;
        const double s = chsh(correlations_at(setting, [&](double a, double b) {
            return hv_correlation(profile, a, b);
        }));
        result.s_values.push_back(s);
        if (std::abs(s) > result.max_abs_s) {
            result.max_abs_s = std::abs(s);
            result.worst_profile = i;
        }
    }
    return result;
}

}  // namespace qtime::bell
