#pragma once

#include <optional>
#include <vector>

#include "mlcpcm/constellation.hpp"

namespace mlcpcm {

/// Default node count per real dimension of the noise quadrature.
inline constexpr int kDefaultQuadratureNodes = 257;
inline constexpr double kDefaultQuadratureHalfWidth = 8.5;

/// One-dimensional rule for integrals of f(t) exp(-t^2) over the real line.
///
/// Two-dimensional (complex) integrals use the tensor product of the rule
/// with itself; a rule of n nodes therefore evaluates n^2 noise points per
/// conditional mean.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
    std::size_t tensor_size() const { return nodes.size() * nodes.size(); }
};

/// Gauss-Hermite rule, exact for polynomials up to degree 2n-1; n <= 100.
QuadratureRule gauss_hermite(int node_count);

/// Trapezoid rule on [-half_width, half_width] with weights h exp(-t^2).
/// Converges geometrically for the log-sum-exp densities of AWGN channels,
/// which Gauss-Hermite resolves poorly near decision boundaries.
QuadratureRule gaussian_trapezoid(int node_count, double half_width = kDefaultQuadratureHalfWidth);

/// gaussian_trapezoid(kDefaultQuadratureNodes).
const QuadratureRule& default_quadrature();

/// Per-level statistics of the modulation partition at one SNR.
struct LevelStats {
    int level = 1;
    double capacity = 0.0;   // bits
    double dispersion = 0.0; // bits^2
    std::optional<double> fbl_rate;
};

/// SNR conventions: Es = 1, snr_db is Es/N0 in dB, complex noise variance N0.
double noise_variance(double snr_db);

/// Capacities and dispersions of all m bit subchannels.
///
/// Square QAM uses the exact per-axis factorization of the tensor rule (the
/// odd-level densities only depend on the in-phase output); other signal sets
/// fall back to `analyze_levels_2d`.
std::vector<LevelStats> analyze_levels(const Constellation& c, double snr_db,
                                       const QuadratureRule& rule = default_quadrature());

/// Same quantities through the full two-dimensional tensor rule, valid for
/// any constellation and labeling.
std::vector<LevelStats> analyze_levels_2d(const Constellation& c, double snr_db,
                                          const QuadratureRule& rule = default_quadrature());

double subchannel_capacity(const Constellation& c, int level, double snr_db);
double subchannel_dispersion(const Constellation& c, int level, double snr_db);

/// I(X;Y) for equiprobable inputs, bits per symbol.
double channel_capacity(const Constellation& c, double snr_db,
                        const QuadratureRule& rule = default_quadrature());

/// I(X;Y) evaluated directly over the full alphabet with the 2D tensor rule.
double channel_capacity_2d(const Constellation& c, double snr_db,
                           const QuadratureRule& rule = default_quadrature());

double q_function(double x);
/// Inverse of q_function on (0, 1); throws std::invalid_argument outside.
double q_inverse(double p);

/// Normal approximation capacity - sqrt(dispersion / n) * Qinv(eps).
double finite_bl_rate(double capacity, double dispersion, double block_length, double eps);

/// 1 - (1 - eps)^(1/m): per-level error probability for a system target eps.
double per_level_error_prob(double eps, int levels);

} // namespace mlcpcm
