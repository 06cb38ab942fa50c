#include "mlcpcm/rank_sequence.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

namespace mlcpcm {

namespace detail {
extern const std::string_view kEmbeddedPolarSequence;
}

bool is_power_of_two(long long n) { return n > 0 && (n & (n - 1)) == 0; }

RankSequence RankSequence::restricted(int n) const
{
    if (!is_power_of_two(n))
        throw std::invalid_argument("block length must be a power of two, got " + std::to_string(n));
    if (n > max_len)
        throw std::invalid_argument("sequence covers at most " + std::to_string(max_len) + " indices");
    RankSequence out{kind, {}, max_len};
    out.order.reserve(n);
    std::ranges::copy_if(order, std::back_inserter(out.order), [n](int i) { return i < n; });
    return out;
}

std::vector<int> RankSequence::most_reliable(int k, int block_length) const
{
    if (k < 0 || k > block_length)
        throw std::invalid_argument("cannot pick " + std::to_string(k) + " of " + std::to_string(block_length) +
                                    " indices");
    std::vector<int> picked;
    picked.reserve(k);
    for (auto it = order.rbegin(); it != order.rend() && static_cast<int>(picked.size()) < k; ++it)
        if (*it < block_length)
            picked.push_back(*it);
    if (static_cast<int>(picked.size()) < k)
        throw std::invalid_argument("sequence does not cover block length " + std::to_string(block_length));
    std::ranges::sort(picked);
    return picked;
}

RankSequence parse_rank_sequence(std::string_view text, int n, SequenceKind kind)
{
    std::istringstream in{std::string(text)};
    std::vector<int> order;
    std::string token;
    while (in >> token) {
        std::size_t used = 0;
        int value = 0;
        try {
            value = std::stoi(token, &used);
        } catch (const std::exception&) {
            throw std::runtime_error("rank sequence: not an integer: '" + token + "'");
        }
        if (used != token.size())
            throw std::runtime_error("rank sequence: not an integer: '" + token + "'");
        order.push_back(value);
    }
    if (order.empty() || !is_power_of_two(static_cast<long long>(order.size())))
        throw std::runtime_error("rank sequence length must be a power of two, got " + std::to_string(order.size()));
    std::vector<char> seen(order.size(), 0);
    for (int v : order) {
        if (v < 0 || v >= static_cast<int>(order.size()) || seen[v])
            throw std::runtime_error("rank sequence is not a permutation (entry " + std::to_string(v) + ")");
        seen[v] = 1;
    }
    RankSequence seq{kind, std::move(order), 0};
    seq.max_len = seq.size();
    return seq.restricted(n);
}

RankSequence load_rank_sequence(const std::filesystem::path& path, int n)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open rank sequence file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_rank_sequence(buf.str(), n);
}

RankSequence five_g_sequence(int n)
{
    static const RankSequence full = parse_rank_sequence(detail::kEmbeddedPolarSequence, 1024);
    return full.restricted(n);
}

RankSequence pw_sequence(int n)
{
    if (!is_power_of_two(n))
        throw std::invalid_argument("block length must be a power of two, got " + std::to_string(n));
    const double beta = std::pow(2.0, 0.25);
    std::vector<double> weight(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double w = 0.0, power = 1.0;
        for (int j = 0; (i >> j) != 0; ++j, power *= beta)
            if ((i >> j) & 1)
                w += power;
        weight[i] = w;
    }
    RankSequence seq{SequenceKind::PolarizationWeight, std::vector<int>(n), n};
    std::iota(seq.order.begin(), seq.order.end(), 0);
    std::ranges::stable_sort(seq.order, [&](int a, int b) { return weight[a] < weight[b]; });
    return seq;
}

RankSequence default_sequence(int n) { return n <= 1024 ? five_g_sequence(n) : pw_sequence(n); }

} // namespace mlcpcm
