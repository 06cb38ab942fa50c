#include "mlcpcm/construction.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "mlcpcm/gaussian_approximation.hpp"

namespace mlcpcm {

namespace {

// Bisection for an increasing function with a sign change on [lo, hi].
// Root of an increasing f on [lo, hi]: false position with the Illinois
// down-weighting of a stale endpoint, so the bracket always shrinks.
double bisect_increasing(const std::function<double(double)>& f, double lo, double hi, const char* what)
{
    double f_lo = f(lo);
    double f_hi = f(hi);
    if (f_lo > 0.0 || f_hi < 0.0)
        throw BracketError(std::string(what) + ": target outside the achievable range on [" + std::to_string(lo) +
                           ", " + std::to_string(hi) + "] dB");
    int side = 0;
    for (int iter = 0; iter < 200; ++iter) {
        double mid = f_hi > f_lo ? (lo * f_hi - hi * f_lo) / (f_hi - f_lo) : 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi))
            mid = 0.5 * (lo + hi);
        const double value = f(mid);
        if (std::abs(value) < 1e-13)
            return mid;
        if (value < 0.0) {
            lo = mid;
            f_lo = value;
            if (side == -1)
                f_hi *= 0.5;
            side = -1;
        } else {
            hi = mid;
            f_hi = value;
            if (side == 1)
                f_lo *= 0.5;
            side = 1;
        }
        if (hi - lo < 1e-13)
            break;
    }
    return 0.5 * (lo + hi);
}

void check_target(const Constellation& c, double target_sum_rate)
{
    const double m = c.order();
    if (!(target_sum_rate > 0.0 && target_sum_rate < m - 1e-6))
        throw std::invalid_argument("target sum-rate " + std::to_string(target_sum_rate) + " must lie in (0, m - 1e-6)");
}

// Ceil that ignores floating-point noise sitting just above an integer.
int snapped_ceil(double x)
{
    const double nearest = std::round(x);
    if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(x)))
        return static_cast<int>(nearest);
    return static_cast<int>(std::ceil(x));
}

void check_shape(int m, int total_bits, int block_length)
{
    if (m != 1 && (m < 2 || m > 8 || m % 2 != 0))
        throw std::invalid_argument("modulation order must be 1, 2, 4, 6 or 8");
    if (!is_power_of_two(block_length))
        throw std::invalid_argument("block length must be a power of two, got " + std::to_string(block_length));
    if (total_bits < 0 || total_bits > m * block_length)
        throw std::invalid_argument("K = " + std::to_string(total_bits) + " infeasible for m*N = " +
                                    std::to_string(m * block_length));
}

CodeConstruction fill_from_sequence(int m, int total_bits, int block_length, ConstructionMethod method,
                                    std::vector<double> values, const RankSequence& seq)
{
    CodeConstruction out;
    out.m = m;
    out.n = block_length;
    out.total_bits = total_bits;
    out.method = method;
    out.allocation = rate_fill(values, total_bits, block_length);
    out.level_values = std::move(values);
    out.stats.sorts = 1;
    out.stats.sorted_elements = static_cast<std::size_t>(m);
    for (int k = 0; k < m; ++k) {
        const int count = out.allocation.counts[k];
        out.info_sets.push_back(seq.most_reliable(count, block_length));
        out.crc_lengths.push_back(crc_length_for(count));
    }
    return out;
}

// Values for the degenerate totals that need no surrogate channel.
std::optional<std::vector<double>> trivial_values(int m, int total_bits, int block_length)
{
    if (total_bits == 0)
        return std::vector<double>(m, 0.0);
    if (total_bits == m * block_length)
        return std::vector<double>(m, 1.0);
    return std::nullopt;
}

} // namespace

std::string to_string(ConstructionMethod method)
{
    switch (method) {
    case ConstructionMethod::RateFillCapacity:
        return "rf1";
    case ConstructionMethod::RateFillFiniteLength:
        return "rf2";
    case ConstructionMethod::GaussianApproximation:
        return "ga";
    }
    return "unknown";
}

ConstructionMethod parse_method(const std::string& name)
{
    if (name == "rf1")
        return ConstructionMethod::RateFillCapacity;
    if (name == "rf2")
        return ConstructionMethod::RateFillFiniteLength;
    if (name == "ga")
        return ConstructionMethod::GaussianApproximation;
    throw std::invalid_argument("unknown construction method '" + name + "' (expected rf1, rf2 or ga)");
}

double solve_snr_capacity(const Constellation& c, double target_sum_rate)
{
    check_target(c, target_sum_rate);
    return bisect_increasing([&](double snr) { return channel_capacity(c, snr) - target_sum_rate; },
                             kSnrSearchLowDb, kSnrSearchHighDb, "solve_snr_capacity");
}

double FiniteLengthTarget::level_eps(int levels) const
{
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("target error probability must lie in (0, 1)");
    return scope == ErrorScope::PerLevel ? eps : per_level_error_prob(eps, levels);
}

std::vector<double> finite_level_rates(const Constellation& c, double snr_db, int block_length,
                                       const FiniteLengthTarget& target)
{
    const double eps_level = target.level_eps(c.order());
    std::vector<double> rates;
    for (const auto& s : analyze_levels(c, snr_db))
        rates.push_back(std::max(0.0, finite_bl_rate(s.capacity, s.dispersion, block_length, eps_level)));
    return rates;
}

double solve_snr_finite(const Constellation& c, double target_sum_rate, int block_length,
                        const FiniteLengthTarget& target)
{
    check_target(c, target_sum_rate);
    target.level_eps(c.order());
    const auto excess = [&](double snr) {
        const auto rates = finite_level_rates(c, snr, block_length, target);
        return std::accumulate(rates.begin(), rates.end(), 0.0) - target_sum_rate;
    };
    return bisect_increasing(excess, kSnrSearchLowDb, kSnrSearchHighDb, "solve_snr_finite");
}

RateAllocation rate_fill(std::span<const double> values, int total_bits, int block_length)
{
    const int m = static_cast<int>(values.size());
    if (m == 0)
        throw std::invalid_argument("rate_fill needs at least one level");
    if (block_length < 1 || total_bits < 0 || total_bits > m * block_length)
        throw std::invalid_argument("rate_fill: K = " + std::to_string(total_bits) + " infeasible for m*N = " +
                                    std::to_string(m * block_length));
    for (double v : values)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("rate_fill: level values must be finite and non-negative");
    if (total_bits > 0 && std::ranges::none_of(values, [](double v) { return v > 0.0; }))
        throw std::invalid_argument("rate_fill: at least one level value must be positive");

    RateAllocation out;
    out.total = total_bits;
    out.counts.assign(m, 0);
    out.level_order.resize(m);
    std::iota(out.level_order.begin(), out.level_order.end(), 0);
    std::ranges::stable_sort(out.level_order, [&](int a, int b) { return values[a] > values[b]; });

    int remaining = total_bits;
    for (int t = 0; t < m; ++t) {
        const int k = out.level_order[t];
        double tail = 0.0;
        for (int u = t; u < m; ++u)
            tail += values[out.level_order[u]];
        if (tail <= 0.0)
            break;
        const int share = snapped_ceil(remaining * values[k] / tail);
        const int count = std::min({share, block_length, remaining});
        out.counts[k] = count;
        remaining -= count;
    }
    // Capped levels leave bits behind; hand them to levels with room in
    // processing order so that the total stays exact.
    for (int t = 0; t < m && remaining > 0; ++t) {
        const int k = out.level_order[t];
        const int add = std::min(block_length - out.counts[k], remaining);
        out.counts[k] += add;
        remaining -= add;
    }
    return out;
}

int crc_length_for(int info_bits) { return info_bits > 16 ? 16 : 0; }

std::vector<char> CodeConstruction::frozen_mask(int level) const
{
    std::vector<char> frozen(n, 1);
    for (int i : info_sets[level])
        frozen[i] = 0;
    return frozen;
}

CodeConstruction construct_rf1(int m, int total_bits, int block_length, const RankSequence& seq)
{
    check_shape(m, total_bits, block_length);
    if (auto values = trivial_values(m, total_bits, block_length))
        return fill_from_sequence(m, total_bits, block_length, ConstructionMethod::RateFillCapacity,
                                  std::move(*values), seq);

    const Constellation c = make_constellation(m);
    const double snr = solve_snr_capacity(c, static_cast<double>(total_bits) / block_length);
    std::vector<double> values;
    for (const auto& s : analyze_levels(c, snr))
        values.push_back(s.capacity);
    auto out = fill_from_sequence(m, total_bits, block_length, ConstructionMethod::RateFillCapacity,
                                  std::move(values), seq);
    out.design_snr_db = snr;
    return out;
}

CodeConstruction construct_rf2(int m, int total_bits, int block_length, const FiniteLengthTarget& target,
                               const RankSequence& seq)
{
    check_shape(m, total_bits, block_length);
    target.level_eps(m);
    if (auto values = trivial_values(m, total_bits, block_length))
        return fill_from_sequence(m, total_bits, block_length, ConstructionMethod::RateFillFiniteLength,
                                  std::move(*values), seq);

    const Constellation c = make_constellation(m);
    const double snr = solve_snr_finite(c, static_cast<double>(total_bits) / block_length, block_length, target);
    auto out = fill_from_sequence(m, total_bits, block_length, ConstructionMethod::RateFillFiniteLength,
                                  finite_level_rates(c, snr, block_length, target), seq);
    out.design_snr_db = snr;
    return out;
}

double biawgn_equivalent_snr(double capacity)
{
    constexpr double low = -40.0, high = 60.0;
    static const Constellation bpsk = build_bpsk();
    const auto cap = [](double snr) { return analyze_levels(bpsk, snr)[0].capacity; };
    if (capacity >= cap(high))
        return high;
    if (capacity <= cap(low))
        return low;
    return bisect_increasing([&](double snr) { return cap(snr) - capacity; }, low, high, "biawgn_equivalent_snr");
}

CodeConstruction construct_ga(const Constellation& c, int total_bits, int block_length, double actual_snr_db)
{
    const int m = c.order();
    check_shape(m, total_bits, block_length);

    CodeConstruction out;
    out.m = m;
    out.n = block_length;
    out.total_bits = total_bits;
    out.method = ConstructionMethod::GaussianApproximation;
    out.design_snr_db = actual_snr_db;

    struct Entry {
        double mean;
        int level;
        int index;
    };
    std::vector<Entry> entries;
    entries.reserve(static_cast<std::size_t>(m) * block_length);
    for (const auto& s : analyze_levels(c, actual_snr_db)) {
        out.level_values.push_back(s.capacity);
        // BI-AWGN LLRs at Es/N0 = snr have mean 4 * Es/N0.
        const double design_mean = 4.0 * std::pow(10.0, biawgn_equivalent_snr(s.capacity) / 10.0);
        const auto means = ga_evolve(design_mean, block_length);
        for (int i = 0; i < block_length; ++i)
            entries.push_back({means[i], s.level - 1, i});
    }
    std::ranges::sort(entries, [](const Entry& a, const Entry& b) {
        if (a.mean != b.mean)
            return a.mean > b.mean;
        if (a.level != b.level)
            return a.level < b.level;
        return a.index < b.index;
    });
    out.stats.sorts = 1;
    out.stats.sorted_elements = entries.size();

    out.info_sets.assign(m, {});
    for (int j = 0; j < total_bits; ++j)
        out.info_sets[entries[j].level].push_back(entries[j].index);
    out.allocation.total = total_bits;
    for (int k = 0; k < m; ++k) {
        std::ranges::sort(out.info_sets[k]);
        out.allocation.counts.push_back(out.info_bits(k));
        out.crc_lengths.push_back(crc_length_for(out.info_bits(k)));
    }
    out.allocation.level_order.resize(m);
    std::iota(out.allocation.level_order.begin(), out.allocation.level_order.end(), 0);
    std::ranges::stable_sort(out.allocation.level_order,
                             [&](int a, int b) { return out.level_values[a] > out.level_values[b]; });
    return out;
}

} // namespace mlcpcm
