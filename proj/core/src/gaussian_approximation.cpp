#include "mlcpcm/gaussian_approximation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mlcpcm/rank_sequence.hpp"

namespace mlcpcm {

double ga_log_phi(double mean)
{
    if (mean <= 0.0)
        return 0.0;
    if (mean < 10.0)
        return std::min(0.0, -0.4527 * std::pow(mean, 0.86) + 0.218);
    return 0.5 * std::log(std::numbers::pi / mean) - mean / 4.0 + std::log1p(-10.0 / (7.0 * mean));
}

double ga_phi(double mean) { return std::exp(ga_log_phi(mean)); }

double ga_phi_inverse_log(double log_value)
{
    if (log_value >= 0.0)
        return 0.0;
    // log phi decays like -x/4 for large x.
    double lo = 0.0, hi = std::max(20.0, -8.0 * log_value + 20.0);
    for (int iter = 0; iter < 200 && hi - lo > 1e-13 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (ga_log_phi(mid) <= log_value)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double ga_check_mean(double a, double b)
{
    // phi_out = 1 - (1 - phi_a)(1 - phi_b) = phi_a + phi_b (1 - phi_a), in logs.
    const double la = ga_log_phi(a);
    const double lb = ga_log_phi(b);
    const double phi_a = std::exp(la);
    const double second = phi_a >= 1.0 ? -INFINITY : lb + std::log1p(-phi_a);
    const double peak = std::max(la, second);
    const double log_out = peak + std::log(std::exp(la - peak) + std::exp(second - peak));
    // A check node never beats its weaker input.
    return std::min({ga_phi_inverse_log(log_out), a, b});
}

std::vector<double> ga_evolve(double design_llr_mean, int n)
{
    if (!(design_llr_mean > 0.0))
        throw std::invalid_argument("ga_evolve: design LLR mean must be positive");
    if (!is_power_of_two(n))
        throw std::invalid_argument("ga_evolve: block length must be a power of two, got " + std::to_string(n));
    // The most significant index bit picks the branch of the first stage, so
    // each stage appends its branch choice as the new least significant bit.
    std::vector<double> means{design_llr_mean};
    while (static_cast<int>(means.size()) < n) {
        std::vector<double> next(means.size() * 2);
        for (std::size_t i = 0; i < means.size(); ++i) {
            next[2 * i] = ga_check_mean(means[i], means[i]);
            next[2 * i + 1] = 2.0 * means[i];
        }
        means = std::move(next);
    }
    return means;
}

} // namespace mlcpcm
