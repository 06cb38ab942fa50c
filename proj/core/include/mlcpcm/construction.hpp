#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlcpcm/constellation.hpp"
#include "mlcpcm/mp_analysis.hpp"
#include "mlcpcm/rank_sequence.hpp"

namespace mlcpcm {

enum class ConstructionMethod {
    RateFillCapacity,     // rf1
    RateFillFiniteLength, // rf2
    GaussianApproximation // ga
};

std::string to_string(ConstructionMethod method);
ConstructionMethod parse_method(const std::string& name);

/// Raised when a target rate lies outside the SNR search bracket.
class BracketError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kSnrSearchLowDb = -40.0;
inline constexpr double kSnrSearchHighDb = 50.0;

/// SNR (dB) at which the constellation's capacity equals the target sum-rate.
double solve_snr_capacity(const Constellation& c, double target_sum_rate);

/// Whether `eps` is the system block error target or already per level.
enum class ErrorScope { System, PerLevel };

struct FiniteLengthTarget {
    double eps = 0.1;
    ErrorScope scope = ErrorScope::System;

    /// Error probability assigned to each of `levels` component codes.
    double level_eps(int levels) const;
};

/// Finite-blocklength rates max(0, M_k) of every level at `snr_db`.
std::vector<double> finite_level_rates(const Constellation& c, double snr_db, int block_length,
                                       const FiniteLengthTarget& target);

/// SNR at which sum_k max(0, M_k) equals the target sum-rate.
double solve_snr_finite(const Constellation& c, double target_sum_rate, int block_length,
                        const FiniteLengthTarget& target = {});

/// Per-level information bit counts; levels are 0-based here.
struct RateAllocation {
    std::vector<int> counts;
    int total = 0;
    std::vector<int> level_order; // processing order, highest value first
};

/// Progressive rate-filling: levels are visited in descending value (ties to
/// the smaller level) and level k_t receives
/// ceil(remaining * v_{k_t} / sum_{t' >= t} v_{k_t'}) bits, capped at N.
/// Bits that do not fit spill to later levels in processing order.
RateAllocation rate_fill(std::span<const double> values, int total_bits, int block_length);

/// Inner CRC attached to a component code carrying `info_bits` bits.
int crc_length_for(int info_bits);

struct ConstructionStats {
    int sorts = 0;
    std::size_t sorted_elements = 0;
};

/// Information sets of all m component polar codes.
struct CodeConstruction {
    int m = 1;
    int n = 0;
    int total_bits = 0;
    ConstructionMethod method = ConstructionMethod::RateFillCapacity;
    std::vector<std::vector<int>> info_sets; // 0-based, ascending
    std::vector<int> crc_lengths;
    std::vector<double> level_values;        // v_k fed to the filler
    std::optional<double> design_snr_db;     // surrogate or actual SNR
    RateAllocation allocation;
    ConstructionStats stats;

    int info_bits(int level) const { return static_cast<int>(info_sets[level].size()); }
    int payload_bits(int level) const { return info_bits(level) - crc_lengths[level]; }
    std::vector<char> frozen_mask(int level) const;
};

/// Capacity-based rate-filling on the equal-capacity surrogate channel.
CodeConstruction construct_rf1(int m, int total_bits, int block_length, const RankSequence& seq);

/// Finite-blocklength rate-filling on the equal finite-rate surrogate channel.
CodeConstruction construct_rf2(int m, int total_bits, int block_length, const FiniteLengthTarget& target,
                               const RankSequence& seq);

/// Online construction: per-level BI-AWGN surrogates of equal capacity at the
/// actual SNR, evolved with the Gaussian approximation; the `total_bits`
/// most reliable of all mN indices win (ties to smaller level, then index).
CodeConstruction construct_ga(const Constellation& c, int total_bits, int block_length, double actual_snr_db);

/// BPSK SNR (dB) whose capacity equals `capacity`, clamped to [-40, 60] dB.
double biawgn_equivalent_snr(double capacity);

} // namespace mlcpcm
