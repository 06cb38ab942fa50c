#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace mlcpcm {

using Complex = std::complex<double>;
using Bit = std::uint8_t;

/// LLR magnitude limit applied by every demapper in the library.
inline constexpr double kLlrClip = 300.0;

/// One real axis of a square QAM: amplitudes indexed by the per-axis label.
struct AxisPam {
    int bits = 0;
    std::vector<double> amplitude_by_label;
};

/// 2^m-ary signal set with a bit labeling.
///
/// Labels are integers whose most significant bit is b_1, so the point of bit
/// string (b_1, ..., b_m) is `point(sum_k b_k 2^(m-k))`. Level k of the
/// modulation partition is label bit b_k, decoded in ascending k.
///
/// Square QAM constellations keep their per-axis factorization: odd levels
/// (b_1, b_3, ...) select the in-phase amplitude and even levels the
/// quadrature amplitude, each axis carrying a binary-reflected Gray code,
/// MSB first, over amplitudes sorted ascending.
class Constellation {
public:
    Constellation(int order, std::vector<Complex> points_by_label);

    int order() const { return order_; }
    std::size_t size() const { return points_.size(); }
    Complex point(std::uint32_t label) const { return points_[label]; }
    std::span<const Complex> points() const { return points_; }

    /// Label bit b_k (1-based level) of `label`.
    Bit label_bit(std::uint32_t label, int level) const
    {
        return static_cast<Bit>((label >> (order_ - level)) & 1u);
    }

    /// True when the points factor into an in-phase and a quadrature PAM,
    /// with odd levels on the in-phase axis and even levels on the other.
    bool separable() const { return separable_; }
    const AxisPam& in_phase() const { return in_phase_; }
    const AxisPam& quadrature() const { return quadrature_; }

    double average_energy() const;

private:
    friend Constellation make_square_qam(int order);

    int order_;
    std::vector<Complex> points_;
    bool separable_ = false;
    AxisPam in_phase_;
    AxisPam quadrature_;
};

/// Square Gray-labeled QAM with unit average energy; order in {2, 4, 6, 8}.
Constellation build_qam(int order);

/// Antipodal signaling on the in-phase axis: bit 0 -> -1, bit 1 -> +1.
Constellation build_bpsk();

/// BPSK for order 1, square QAM otherwise.
Constellation make_constellation(int order);

/// Bits b_1..b_{k-1} already known when demapping level k.
class BitPrefix {
public:
    BitPrefix(int level, std::span<const Bit> bits);

    int level() const { return level_; }
    std::uint32_t value() const { return value_; }

    /// Prefix packed MSB-first as an integer, for hot loops.
    static BitPrefix packed(int level, std::uint32_t value)
    {
        BitPrefix p;
        p.level_ = level;
        p.value_ = value;
        return p;
    }

private:
    BitPrefix() = default;
    int level_ = 1;
    std::uint32_t value_ = 0;
};

/// Label integer of an m-bit string, b_1 first.
std::uint32_t pack_label(std::span<const Bit> bits);

/// Symbol phi(b_1..b_m); throws std::invalid_argument on a length mismatch.
Complex map_bits(const Constellation& c, std::span<const Bit> bits);

/// ln W_k(y, b_1^{k-1} | 0) / W_k(y, b_1^{k-1} | 1) under complex AWGN with
/// total noise variance `noise_var` (N0), clipped to +-kLlrClip.
double level_llr(const Constellation& c, Complex y, double noise_var, const BitPrefix& prefix);

} // namespace mlcpcm
