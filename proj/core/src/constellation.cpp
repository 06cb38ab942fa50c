#include "mlcpcm/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mlcpcm {

namespace {

std::uint32_t gray(std::uint32_t v) { return v ^ (v >> 1); }

AxisPam gray_pam(int bits, double scale)
{
    AxisPam axis;
    axis.bits = bits;
    const std::uint32_t levels = 1u << bits;
    axis.amplitude_by_label.assign(levels, 0.0);
    for (std::uint32_t j = 0; j < levels; ++j) {
        const double amplitude = (2.0 * j - (levels - 1.0)) * scale;
        axis.amplitude_by_label[gray(j)] = amplitude;
    }
    return axis;
}

// Splits a label into its in-phase (odd levels) and quadrature (even levels)
// axis labels, both MSB-first.
std::pair<std::uint32_t, std::uint32_t> split_label(std::uint32_t label, int order)
{
    std::uint32_t i_label = 0, q_label = 0;
    for (int k = 1; k <= order; ++k) {
        const std::uint32_t bit = (label >> (order - k)) & 1u;
        if (k % 2 == 1)
            i_label = (i_label << 1) | bit;
        else
            q_label = (q_label << 1) | bit;
    }
    return {i_label, q_label};
}

double log_sum_exp_range(const Constellation& c, Complex y, double inv_noise,
                         std::uint32_t first, std::uint32_t count)
{
    double peak = -std::numeric_limits<double>::infinity();
    for (std::uint32_t l = first; l < first + count; ++l)
        peak = std::max(peak, -std::norm(y - c.point(l)) * inv_noise);
    double sum = 0.0;
    for (std::uint32_t l = first; l < first + count; ++l)
        sum += std::exp(-std::norm(y - c.point(l)) * inv_noise - peak);
    return peak + std::log(sum);
}

} // namespace

Constellation::Constellation(int order, std::vector<Complex> points_by_label)
    : order_(order), points_(std::move(points_by_label))
{
    if (order < 1 || order > 16)
        throw std::invalid_argument("constellation order out of range: " + std::to_string(order));
    if (points_.size() != (std::size_t{1} << order))
        throw std::invalid_argument("constellation needs exactly 2^m points");
}

double Constellation::average_energy() const
{
    double sum = 0.0;
    for (const auto& p : points_)
        sum += std::norm(p);
    return sum / static_cast<double>(points_.size());
}

Constellation make_square_qam(int order)
{
    const int i_bits = (order + 1) / 2;
    const int q_bits = order / 2;
    const double i_levels = std::ldexp(1.0, i_bits);
    const double q_levels = std::ldexp(1.0, q_bits);
    // Per-axis energy of {+-1, +-3, ...} is (M^2 - 1) / 3.
    const double energy = (i_levels * i_levels - 1.0) / 3.0 + (q_levels * q_levels - 1.0) / 3.0;
    const double scale = 1.0 / std::sqrt(energy);

    AxisPam in_phase = gray_pam(i_bits, scale);
    AxisPam quadrature = gray_pam(q_bits, scale);

    std::vector<Complex> points(std::size_t{1} << order);
    for (std::uint32_t label = 0; label < points.size(); ++label) {
        const auto [il, ql] = split_label(label, order);
        points[label] = {in_phase.amplitude_by_label[il], quadrature.amplitude_by_label[ql]};
    }
    Constellation c(order, std::move(points));
    c.separable_ = true;
    c.in_phase_ = std::move(in_phase);
    c.quadrature_ = std::move(quadrature);
    return c;
}

Constellation build_qam(int order)
{
    if (order < 2 || order > 8 || order % 2 != 0)
        throw std::invalid_argument("square QAM needs an even order in {2,4,6,8}, got " +
                                    std::to_string(order));
    return make_square_qam(order);
}

Constellation build_bpsk() { return make_square_qam(1); }

Constellation make_constellation(int order)
{
    return order == 1 ? build_bpsk() : build_qam(order);
}

BitPrefix::BitPrefix(int level, std::span<const Bit> bits) : level_(level)
{
    if (level < 1 || bits.size() != static_cast<std::size_t>(level - 1))
        throw std::invalid_argument("bit prefix length must equal level - 1");
    for (Bit b : bits)
        value_ = (value_ << 1) | (b & 1u);
}

std::uint32_t pack_label(std::span<const Bit> bits)
{
    std::uint32_t label = 0;
    for (Bit b : bits)
        label = (label << 1) | (b & 1u);
    return label;
}

Complex map_bits(const Constellation& c, std::span<const Bit> bits)
{
    if (bits.size() != static_cast<std::size_t>(c.order()))
        throw std::invalid_argument("map_bits: expected " + std::to_string(c.order()) + " bits, got " +
                                    std::to_string(bits.size()));
    return c.point(pack_label(bits));
}

double level_llr(const Constellation& c, Complex y, double noise_var, const BitPrefix& prefix)
{
    const int m = c.order();
    const int k = prefix.level();
    if (k > m)
        throw std::invalid_argument("level exceeds the constellation order");
    if (!(noise_var > 0.0))
        throw std::invalid_argument("noise variance must be positive");
    const std::uint32_t count = 1u << (m - k);
    const std::uint32_t base = (prefix.value() << 1) << (m - k);
    const double inv_noise = 1.0 / noise_var;
    const double llr = log_sum_exp_range(c, y, inv_noise, base, count) -
                       log_sum_exp_range(c, y, inv_noise, base | count, count);
    if (std::isnan(llr))
        return 0.0;
    return std::clamp(llr, -kLlrClip, kLlrClip);
}

} // namespace mlcpcm
