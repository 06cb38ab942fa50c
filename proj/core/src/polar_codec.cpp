#include "mlcpcm/polar_codec.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mlcpcm/crc.hpp"
#include "mlcpcm/rank_sequence.hpp"

namespace mlcpcm {

namespace {

inline double check_update(double a, double b)
{
    const double mag = std::min(std::abs(a), std::abs(b));
    return ((a < 0.0) != (b < 0.0)) ? -mag : mag;
}

inline double bit_update(double a, double b, Bit left) { return b + (left ? -a : a); }

inline Bit hard_decision(double llr) { return llr < 0.0 ? 1 : 0; }

void sc_recurse(std::span<const double> llr, const char* frozen, Bit* u, Bit* x, double& metric)
{
    const std::size_t n = llr.size();
    if (n == 1) {
        const Bit bit = frozen[0] ? 0 : hard_decision(llr[0]);
        if (bit != hard_decision(llr[0]))
            metric += std::abs(llr[0]);
        u[0] = x[0] = bit;
        return;
    }
    const std::size_t h = n / 2;
    std::vector<double> child(h);
    for (std::size_t j = 0; j < h; ++j)
        child[j] = check_update(llr[j], llr[j + h]);
    sc_recurse(child, frozen, u, x, metric);
    for (std::size_t j = 0; j < h; ++j)
        child[j] = bit_update(llr[j], llr[j + h], x[j]);
    sc_recurse(child, frozen + h, u + h, x + h, metric);
    for (std::size_t j = 0; j < h; ++j)
        x[j] ^= x[j + h];
}

void check_llrs(std::span<const double> llrs, const ComponentCode& code)
{
    if (static_cast<int>(llrs.size()) != code.n)
        throw std::invalid_argument("decoder: expected " + std::to_string(code.n) + " LLRs, got " +
                                    std::to_string(llrs.size()));
}

} // namespace

void polar_transform(std::span<Bit> bits)
{
    const std::size_t n = bits.size();
    if (!is_power_of_two(static_cast<long long>(n)))
        throw std::invalid_argument("polar transform length must be a power of two, got " + std::to_string(n));
    for (std::size_t half = 1; half < n; half *= 2)
        for (std::size_t i = 0; i < n; i += 2 * half)
            for (std::size_t j = i; j < i + half; ++j)
                bits[j] ^= bits[j + half];
}

std::vector<Bit> polar_encode(std::span<const Bit> u)
{
    std::vector<Bit> x(u.begin(), u.end());
    polar_transform(x);
    return x;
}

ComponentCode::ComponentCode(int block_length, std::vector<int> info_indices, int crc_bits)
    : n(block_length), info_set(std::move(info_indices)), crc_len(crc_bits)
{
    if (!is_power_of_two(n))
        throw std::invalid_argument("component code length must be a power of two");
    if (!std::ranges::is_sorted(info_set) || std::ranges::adjacent_find(info_set) != info_set.end())
        throw std::invalid_argument("information set must be strictly ascending");
    if (!info_set.empty() && (info_set.front() < 0 || info_set.back() >= n))
        throw std::invalid_argument("information index out of range");
    if (crc_len < 0 || crc_len > info_len())
        throw std::invalid_argument("CRC longer than the information set");
}

std::vector<char> ComponentCode::frozen_mask() const
{
    std::vector<char> frozen(n, 1);
    for (int i : info_set)
        frozen[i] = 0;
    return frozen;
}

std::vector<Bit> place_payload(const ComponentCode& code, std::span<const Bit> payload)
{
    if (static_cast<int>(payload.size()) != code.payload_len())
        throw std::invalid_argument("payload length " + std::to_string(payload.size()) + " != " +
                                    std::to_string(code.payload_len()));
    std::vector<Bit> info = code.crc_len > 0 ? crc_attach(payload) : std::vector<Bit>(payload.begin(), payload.end());
    std::vector<Bit> u(code.n, 0);
    for (int j = 0; j < code.info_len(); ++j)
        u[code.info_set[j]] = info[j];
    return u;
}

std::vector<Bit> encode_component(const ComponentCode& code, std::span<const Bit> payload)
{
    auto u = place_payload(code, payload);
    polar_transform(u);
    return u;
}

std::vector<Bit> extract_payload(const ComponentCode& code, std::span<const Bit> u)
{
    std::vector<Bit> payload(code.payload_len());
    for (int j = 0; j < code.payload_len(); ++j)
        payload[j] = u[code.info_set[j]];
    return payload;
}

namespace {

bool info_crc_ok(const ComponentCode& code, std::span<const Bit> u)
{
    if (code.crc_len == 0)
        return true;
    std::vector<Bit> info(code.info_len());
    for (int j = 0; j < code.info_len(); ++j)
        info[j] = u[code.info_set[j]];
    return crc_check(info);
}

} // namespace

DecodeResult sc_decode(std::span<const double> llrs, const ComponentCode& code)
{
    check_llrs(llrs, code);
    const auto frozen = code.frozen_mask();
    DecodeResult out;
    out.u.assign(code.n, 0);
    out.codeword.assign(code.n, 0);
    sc_recurse(llrs, frozen.data(), out.u.data(), out.codeword.data(), out.path_metric);
    out.payload = extract_payload(code, out.u);
    out.crc_ok = info_crc_ok(code, out.u);
    return out;
}

ListDecoder::ListDecoder(int block_length, int list_size)
    : n_(block_length), depth_(std::countr_zero(static_cast<unsigned>(block_length))), list_size_(list_size)
{
    if (!is_power_of_two(block_length))
        throw std::invalid_argument("list decoder length must be a power of two");
    if (!is_power_of_two(list_size))
        throw std::invalid_argument("list size must be a power of two");
    layers_.resize(depth_ + 1);
    for (int layer = 0; layer <= depth_; ++layer) {
        Layer& l = layers_[layer];
        l.size = n_ >> layer;
        if (layer > 0)
            l.llr.assign(static_cast<std::size_t>(list_size_) * l.size, 0.0);
        l.bits.assign(static_cast<std::size_t>(list_size_) * 2 * l.size, 0);
        l.llr_refs.assign(list_size_, 0);
        l.bit_refs.assign(list_size_, 0);
    }
    llr_idx.assign(list_size_, std::vector<int>(depth_ + 1, -1));
    bit_idx.assign(list_size_, std::vector<int>(depth_ + 1, -1));
    active_.assign(list_size_, 0);
    metric_.assign(list_size_, 0.0);
    u_.assign(list_size_, std::vector<Bit>(n_, 0));
}

void ListDecoder::reset()
{
    for (auto& l : layers_) {
        std::ranges::fill(l.llr_refs, 0);
        std::ranges::fill(l.bit_refs, 0);
        l.llr_free.clear();
        l.bit_free.clear();
        for (int s = list_size_ - 1; s >= 0; --s) {
            l.llr_free.push_back(s);
            l.bit_free.push_back(s);
        }
    }
    std::ranges::fill(active_, 0);
    free_paths_.clear();
    for (int p = list_size_ - 1; p >= 0; --p)
        free_paths_.push_back(p);

    const int path = free_paths_.back();
    free_paths_.pop_back();
    active_[path] = 1;
    metric_[path] = 0.0;
    for (int layer = 0; layer <= depth_; ++layer) {
        Layer& l = layers_[layer];
        if (layer > 0) {
            llr_idx[path][layer] = l.llr_free.back();
            l.llr_free.pop_back();
            l.llr_refs[llr_idx[path][layer]] = 1;
        }
        bit_idx[path][layer] = l.bit_free.back();
        l.bit_free.pop_back();
        l.bit_refs[bit_idx[path][layer]] = 1;
    }
    trace_.clear();
}

int ListDecoder::clone_path(int path)
{
    const int twin = free_paths_.back();
    free_paths_.pop_back();
    active_[twin] = 1;
    metric_[twin] = metric_[path];
    std::ranges::copy(u_[path], u_[twin].begin());
    for (int layer = 0; layer <= depth_; ++layer) {
        Layer& l = layers_[layer];
        if (layer > 0) {
            llr_idx[twin][layer] = llr_idx[path][layer];
            ++l.llr_refs[llr_idx[path][layer]];
        }
        bit_idx[twin][layer] = bit_idx[path][layer];
        ++l.bit_refs[bit_idx[path][layer]];
    }
    return twin;
}

void ListDecoder::kill_path(int path)
{
    active_[path] = 0;
    free_paths_.push_back(path);
    for (int layer = 0; layer <= depth_; ++layer) {
        Layer& l = layers_[layer];
        if (layer > 0 && --l.llr_refs[llr_idx[path][layer]] == 0)
            l.llr_free.push_back(llr_idx[path][layer]);
        if (--l.bit_refs[bit_idx[path][layer]] == 0)
            l.bit_free.push_back(bit_idx[path][layer]);
    }
}

double* ListDecoder::writable_llr(int path, int layer)
{
    Layer& l = layers_[layer];
    int& idx = llr_idx[path][layer];
    if (l.llr_refs[idx] > 1) {
        // Every LLR array is fully overwritten before it is read, so a shared
        // one is simply replaced by a fresh array.
        --l.llr_refs[idx];
        idx = l.llr_free.back();
        l.llr_free.pop_back();
        l.llr_refs[idx] = 1;
    }
    return l.llr.data() + static_cast<std::size_t>(idx) * l.size;
}

Bit* ListDecoder::writable_bits(int path, int layer)
{
    Layer& l = layers_[layer];
    int& idx = bit_idx[path][layer];
    const std::size_t width = 2 * static_cast<std::size_t>(l.size);
    if (l.bit_refs[idx] > 1) {
        --l.bit_refs[idx];
        const int fresh = l.bit_free.back();
        l.bit_free.pop_back();
        std::copy_n(l.bits.data() + idx * width, width, l.bits.data() + fresh * width);
        idx = fresh;
        l.bit_refs[idx] = 1;
    }
    return l.bits.data() + idx * width;
}

const double* ListDecoder::llr_of(int path, int layer) const
{
    const Layer& l = layers_[layer];
    return l.llr.data() + static_cast<std::size_t>(llr_idx[path][layer]) * l.size;
}

const Bit* ListDecoder::bits_of(int path, int layer) const
{
    const Layer& l = layers_[layer];
    return l.bits.data() + static_cast<std::size_t>(bit_idx[path][layer]) * 2 * l.size;
}

void ListDecoder::compute_llrs(int phase, std::span<const double> channel)
{
    // Layers above the highest branch bit that flipped since the previous
    // phase still hold valid LLRs.
    const int start = phase == 0 ? 1 : depth_ - std::countr_zero(static_cast<unsigned>(phase));
    for (int layer = start; layer <= depth_; ++layer) {
        const int size = layers_[layer].size;
        const bool right_branch = phase != 0 && layer == start;
        for (int path = 0; path < list_size_; ++path) {
            if (!active_[path])
                continue;
            const double* parent = layer == 1 ? channel.data() : llr_of(path, layer - 1);
            double* dst = writable_llr(path, layer);
            if (right_branch) {
                const Bit* left = bits_of(path, layer);
                for (int j = 0; j < size; ++j)
                    dst[j] = bit_update(parent[j], parent[j + size], left[j]);
            } else {
                for (int j = 0; j < size; ++j)
                    dst[j] = check_update(parent[j], parent[j + size]);
            }
        }
    }
}

void ListDecoder::store_bit(int path, int phase, Bit bit)
{
    u_[path][phase] = bit;
    const auto branch = [&](int layer) { return (phase >> (depth_ - layer)) & 1; };
    if (depth_ == 0) {
        writable_bits(path, 0)[0] = bit;
        return;
    }
    writable_bits(path, depth_)[branch(depth_)] = bit;
    // A finished right child completes its parent: [left ^ right, right].
    for (int layer = depth_; layer >= 1 && branch(layer) == 1; --layer) {
        const int size = layers_[layer].size;
        const Bit* children = bits_of(path, layer);
        const int column = layer - 1 >= 1 ? branch(layer - 1) : 0;
        Bit* dst = writable_bits(path, layer - 1) + column * 2 * size;
        for (int j = 0; j < size; ++j) {
            dst[j] = children[j] ^ children[size + j];
            dst[size + j] = children[size + j];
        }
    }
}

DecodeResult ListDecoder::decode(std::span<const double> llrs, const ComponentCode& code)
{
    if (code.n != n_)
        throw std::invalid_argument("code length does not match decoder");
    check_llrs(llrs, code);
    const auto frozen = code.frozen_mask();
    reset();

    struct Candidate {
        double metric;
        int path;
        Bit bit;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(2 * list_size_);
    std::vector<double> leaf(list_size_);
    std::vector<int> snapshot;
    snapshot.reserve(list_size_);

    for (int phase = 0; phase < n_; ++phase) {
        if (depth_ > 0)
            compute_llrs(phase, llrs);
        snapshot.clear();
        for (int path = 0; path < list_size_; ++path)
            if (active_[path]) {
                snapshot.push_back(path);
                leaf[path] = depth_ > 0 ? llr_of(path, depth_)[0] : llrs[0];
            }

        if (frozen[phase]) {
            for (int path : snapshot) {
                if (leaf[path] < 0.0)
                    metric_[path] -= leaf[path];
                store_bit(path, phase, 0);
            }
        } else {
            candidates.clear();
            for (int path : snapshot) {
                const double penalty = std::abs(leaf[path]);
                const Bit hard = hard_decision(leaf[path]);
                candidates.push_back({metric_[path] + (hard == 0 ? 0.0 : penalty), path, 0});
                candidates.push_back({metric_[path] + (hard == 1 ? 0.0 : penalty), path, 1});
            }
            const std::size_t keep = std::min<std::size_t>(list_size_, candidates.size());
            std::ranges::partial_sort(candidates, candidates.begin() + keep, [](const Candidate& a, const Candidate& b) {
                if (a.metric != b.metric)
                    return a.metric < b.metric;
                if (a.path != b.path)
                    return a.path < b.path;
                return a.bit < b.bit;
            });
            std::vector<std::array<double, 2>> survivor(list_size_, {-1.0, -1.0});
            for (std::size_t c = 0; c < keep; ++c)
                survivor[candidates[c].path][candidates[c].bit] = candidates[c].metric;

            for (int path : snapshot)
                if (survivor[path][0] < 0.0 && survivor[path][1] < 0.0)
                    kill_path(path);
            for (int path : snapshot) {
                const bool zero = survivor[path][0] >= 0.0;
                const bool one = survivor[path][1] >= 0.0;
                if (zero && one) {
                    const int twin = clone_path(path);
                    metric_[twin] = survivor[path][1];
                    store_bit(twin, phase, 1);
                    metric_[path] = survivor[path][0];
                    store_bit(path, phase, 0);
                } else if (zero || one) {
                    metric_[path] = survivor[path][one ? 1 : 0];
                    store_bit(path, phase, one ? 1 : 0);
                }
            }
        }
        if (trace_enabled_) {
            double best = INFINITY;
            for (int path = 0; path < list_size_; ++path)
                if (active_[path])
                    best = std::min(best, metric_[path]);
            trace_.push_back(best);
        }
    }

    std::vector<int> ranked;
    for (int path = 0; path < list_size_; ++path)
        if (active_[path])
            ranked.push_back(path);
    std::ranges::stable_sort(ranked, [&](int a, int b) { return metric_[a] < metric_[b]; });

    int chosen = ranked.front();
    bool crc_ok = code.crc_len == 0;
    if (code.crc_len > 0) {
        for (int path : ranked)
            if (info_crc_ok(code, u_[path])) {
                chosen = path;
                crc_ok = true;
                break;
            }
    }

    DecodeResult out;
    out.u = u_[chosen];
    const Bit* root = bits_of(chosen, 0);
    out.codeword.assign(root, root + n_);
    out.payload = extract_payload(code, out.u);
    out.crc_ok = crc_ok;
    out.path_metric = metric_[chosen];
    return out;
}

DecodeResult scl_decode(std::span<const double> llrs, const ComponentCode& code, int list_size)
{
    ListDecoder decoder(code.n, list_size);
    return decoder.decode(llrs, code);
}

} // namespace mlcpcm
