#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

namespace mlcpcm {

enum class SequenceKind { FiveGPolar, PolarizationWeight };

/// Channel-independent reliability ordering of polar sub-channel indices,
/// least reliable first. Indices are 0-based in natural (non bit-reversed)
/// order of the transform u * F^{(x)n}.
struct RankSequence {
    SequenceKind kind = SequenceKind::FiveGPolar;
    std::vector<int> order;
    int max_len = 0;

    int size() const { return static_cast<int>(order.size()); }

    /// Entries below n in their original relative order.
    RankSequence restricted(int n) const;

    /// The k most reliable indices below `block_length`, sorted ascending.
    std::vector<int> most_reliable(int k, int block_length) const;
};

/// 1024-entry 5G NR sequence restricted to n (n <= 1024).
RankSequence five_g_sequence(int n);

/// Polarization-weight order: w(i) = sum_j b_j 2^(j/4); ties to smaller index.
RankSequence pw_sequence(int n);

/// 5G sequence for n <= 1024, PW beyond.
RankSequence default_sequence(int n);

/// Parses whitespace-separated integers, validates that they form a
/// permutation of [0, len), and restricts to n. Throws std::runtime_error.
RankSequence parse_rank_sequence(std::string_view text, int n, SequenceKind kind = SequenceKind::FiveGPolar);
RankSequence load_rank_sequence(const std::filesystem::path& path, int n);

bool is_power_of_two(long long n);

} // namespace mlcpcm
