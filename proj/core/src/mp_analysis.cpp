#include "mlcpcm/mp_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mlcpcm {

namespace {

// Accumulated E[i_k] and E[i_k^2] per level of one labeled signal set.
struct Moments {
    std::vector<double> first;
    std::vector<double> second;
};

// Quadrature rule with weights normalized to a probability measure, in
// either one or two real dimensions.
struct NoisePoint {
    double re;
    double im;
    double weight;
};

std::vector<NoisePoint> noise_points(const QuadratureRule& rule, double noise_var, bool complex_noise)
{
    // Real and imaginary parts each have variance N0/2, i.e. density
    // proportional to exp(-n^2 / N0); n = sqrt(N0) t matches exp(-t^2).
    const double scale = std::sqrt(noise_var);
    double weight_sum = 0.0;
    for (double w : rule.weights)
        weight_sum += w;
    // Nodes below this relative weight contribute nothing in double precision
    // and would let the own-label likelihood underflow.
    constexpr double negligible = 1e-28;
    std::vector<NoisePoint> pts;
    if (complex_noise) {
        pts.reserve(rule.tensor_size());
        for (std::size_t a = 0; a < rule.size(); ++a)
            for (std::size_t b = 0; b < rule.size(); ++b) {
                if (rule.weights[a] * rule.weights[b] < negligible * weight_sum * weight_sum)
                    continue;
                pts.push_back({scale * rule.nodes[a], scale * rule.nodes[b],
                               rule.weights[a] * rule.weights[b] / (weight_sum * weight_sum)});
            }
    } else {
        pts.reserve(rule.size());
        for (std::size_t a = 0; a < rule.size(); ++a)
            if (rule.weights[a] >= negligible * weight_sum)
                pts.push_back({scale * rule.nodes[a], 0.0, rule.weights[a] / weight_sum});
    }
    return pts;
}

// Information densities i_k = log2 P(y|b_1^k) / P(y|b_1^{k-1}) averaged over
// equiprobable labels and the noise rule. Labels are MSB-first: the labels
// sharing b_1^k with L form the contiguous block of size 2^(bits-k) around L.
Moments level_moments(std::span<const Complex> points, int bits, double noise_var,
                      std::span<const NoisePoint> noise)
{
    const std::size_t count = points.size();
    const double inv_noise = 1.0 / noise_var;
    const double inv_count = 1.0 / static_cast<double>(count);

    Moments mom;
    mom.first.assign(bits, 0.0);
    mom.second.assign(bits, 0.0);
    std::vector<double> expo(count), lin(count), block(bits + 1);

    for (std::size_t label = 0; label < count; ++label) {
        const Complex x = points[label];
        for (const auto& n : noise) {
            const Complex y = x + Complex(n.re, n.im);
            double peak = -std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < count; ++j) {
                expo[j] = -std::norm(y - points[j]) * inv_noise;
                peak = std::max(peak, expo[j]);
            }
            for (std::size_t j = 0; j < count; ++j)
                lin[j] = std::exp(expo[j] - peak);

            // block[k] = sum over labels sharing the first k bits with `label`.
            block[bits] = lin[label];
            for (int k = bits; k >= 1; --k) {
                const int width_bits = bits - k;
                const std::size_t sibling = ((label >> width_bits) ^ 1u) << width_bits;
                double s = 0.0;
                for (std::size_t j = sibling; j < sibling + (std::size_t{1} << width_bits); ++j)
                    s += lin[j];
                block[k - 1] = block[k] + s;
            }

            const double w = n.weight * inv_count;
            for (int k = 1; k <= bits; ++k) {
                const double density = 1.0 + std::log2(block[k] / block[k - 1]);
                mom.first[k - 1] += w * density;
                mom.second[k - 1] += w * density * density;
            }
        }
    }
    return mom;
}

// E[log2 W(y|x) / ((1/M) sum_x' W(y|x'))] over the full alphabet.
double mutual_information(std::span<const Complex> points, double noise_var, std::span<const NoisePoint> noise)
{
    const double inv_noise = 1.0 / noise_var;
    const double count = static_cast<double>(points.size());
    double total = 0.0;
    for (const Complex x : points) {
        for (const auto& n : noise) {
            const Complex y = x + Complex(n.re, n.im);
            const double own = -std::norm(y - x) * inv_noise;
            double peak = own;
            for (const Complex p : points)
                peak = std::max(peak, -std::norm(y - p) * inv_noise);
            double sum = 0.0;
            for (const Complex p : points)
                sum += std::exp(-std::norm(y - p) * inv_noise - peak);
            total += n.weight * (std::log2(count) + (own - peak - std::log(sum)) / std::numbers::ln2);
        }
    }
    return total / count;
}

double clamp_dispersion(double v)
{
    if (v >= 0.0)
        return v;
    if (v > -1e-10)
        return 0.0;
    throw std::runtime_error("negative dispersion " + std::to_string(v) + ": quadrature failure");
}

std::vector<Complex> axis_points(const AxisPam& axis)
{
    std::vector<Complex> pts;
    pts.reserve(axis.amplitude_by_label.size());
    for (double a : axis.amplitude_by_label)
        pts.emplace_back(a, 0.0);
    return pts;
}

void check_level(const Constellation& c, int level)
{
    if (level < 1 || level > c.order())
        throw std::invalid_argument("level " + std::to_string(level) + " outside [1, m]");
}

} // namespace

QuadratureRule gauss_hermite(int node_count)
{
    if (node_count < 1 || node_count > 100)
        throw std::invalid_argument("Gauss-Hermite rule supports 1..100 nodes");
    // Newton iteration on orthonormal Hermite polynomials with the classic
    // asymptotic starting guesses for the largest roots.
    const int n = node_count;
    const double pim4 = 1.0 / std::pow(std::numbers::pi, 0.25);
    QuadratureRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    double z = 0.0;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
        else if (i == 1)
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * rule.nodes[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * rule.nodes[1];
        else
            z = 2.0 * z - rule.nodes[i - 2];
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = pim4, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z)))
                break;
        }
        rule.nodes[i] = z;
        rule.nodes[n - 1 - i] = -z;
        rule.weights[i] = 2.0 / (pp * pp);
        rule.weights[n - 1 - i] = rule.weights[i];
    }
    std::ranges::reverse(rule.nodes);
    std::ranges::reverse(rule.weights);
    return rule;
}

QuadratureRule gaussian_trapezoid(int node_count, double half_width)
{
    if (node_count < 2 || !(half_width > 0.0))
        throw std::invalid_argument("trapezoid rule needs >= 2 nodes and a positive width");
    QuadratureRule rule;
    const double step = 2.0 * half_width / (node_count - 1);
    for (int i = 0; i < node_count; ++i) {
        const double t = -half_width + step * i;
        rule.nodes.push_back(t);
        rule.weights.push_back(step * std::exp(-t * t));
    }
    return rule;
}

const QuadratureRule& default_quadrature()
{
    static const QuadratureRule rule = gaussian_trapezoid(kDefaultQuadratureNodes);
    return rule;
}

double noise_variance(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

std::vector<LevelStats> analyze_levels_2d(const Constellation& c, double snr_db, const QuadratureRule& rule)
{
    const double n0 = noise_variance(snr_db);
    const auto noise = noise_points(rule, n0, true);
    const Moments mom = level_moments(c.points(), c.order(), n0, noise);
    std::vector<LevelStats> out(c.order());
    for (int k = 1; k <= c.order(); ++k) {
        out[k - 1].level = k;
        out[k - 1].capacity = std::clamp(mom.first[k - 1], 0.0, 1.0);
        out[k - 1].dispersion = clamp_dispersion(mom.second[k - 1] - mom.first[k - 1] * mom.first[k - 1]);
    }
    return out;
}

std::vector<LevelStats> analyze_levels(const Constellation& c, double snr_db, const QuadratureRule& rule)
{
    if (!c.separable())
        return analyze_levels_2d(c, snr_db, rule);

    const double n0 = noise_variance(snr_db);
    const auto noise = noise_points(rule, n0, false);
    std::vector<LevelStats> out(c.order());
    // Axis level j is global level 2j-1 (in-phase) or 2j (quadrature).
    const auto fill = [&](const AxisPam& axis, int offset) {
        if (axis.bits == 0)
            return;
        const auto pts = axis_points(axis);
        const Moments mom = level_moments(pts, axis.bits, n0, noise);
        for (int j = 0; j < axis.bits; ++j) {
            const int k = 2 * j + offset;
            out[k - 1].level = k;
            out[k - 1].capacity = std::clamp(mom.first[j], 0.0, 1.0);
            out[k - 1].dispersion = clamp_dispersion(mom.second[j] - mom.first[j] * mom.first[j]);
        }
    };
    fill(c.in_phase(), 1);
    fill(c.quadrature(), 2);
    return out;
}

double subchannel_capacity(const Constellation& c, int level, double snr_db)
{
    check_level(c, level);
    return analyze_levels(c, snr_db)[level - 1].capacity;
}

double subchannel_dispersion(const Constellation& c, int level, double snr_db)
{
    check_level(c, level);
    return analyze_levels(c, snr_db)[level - 1].dispersion;
}

double channel_capacity_2d(const Constellation& c, double snr_db, const QuadratureRule& rule)
{
    const double n0 = noise_variance(snr_db);
    const auto noise = noise_points(rule, n0, true);
    return std::clamp(mutual_information(c.points(), n0, noise), 0.0, static_cast<double>(c.order()));
}

double channel_capacity(const Constellation& c, double snr_db, const QuadratureRule& rule)
{
    if (!c.separable())
        return channel_capacity_2d(c, snr_db, rule);
    const double n0 = noise_variance(snr_db);
    const auto noise = noise_points(rule, n0, false);
    double total = 0.0;
    for (const AxisPam* axis : {&c.in_phase(), &c.quadrature()}) {
        if (axis->bits == 0)
            continue;
        const auto pts = axis_points(*axis);
        total += mutual_information(pts, n0, noise);
    }
    return std::clamp(total, 0.0, static_cast<double>(c.order()));
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double q_inverse(double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("q_inverse needs p in (0, 1), got " + std::to_string(p));
    if (p == 0.5)
        return 0.0;
    // Q is strictly decreasing; Q(+-38.5) lies beyond the double range of p.
    double lo = -38.5, hi = 38.5;
    while (hi - lo > 1e-14 * std::max(1.0, std::abs(lo))) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi)
            break;
        if (q_function(mid) > p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double finite_bl_rate(double capacity, double dispersion, double block_length, double eps)
{
    if (block_length < 1.0)
        throw std::invalid_argument("finite_bl_rate: block length must be >= 1");
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("finite_bl_rate: eps must lie in (0, 1)");
    if (dispersion < 0.0)
        throw std::invalid_argument("finite_bl_rate: negative dispersion");
    if (dispersion == 0.0)
        return capacity;
    return capacity - std::sqrt(dispersion / block_length) * q_inverse(eps);
}

double per_level_error_prob(double eps, int levels)
{
    if (!(eps >= 0.0 && eps < 1.0))
        throw std::invalid_argument("per_level_error_prob: eps must lie in [0, 1)");
    if (levels < 1)
        throw std::invalid_argument("per_level_error_prob: need at least one level");
    if (levels == 1)
        return eps;
    return -std::expm1(std::log1p(-eps) / levels);
}

} // namespace mlcpcm
