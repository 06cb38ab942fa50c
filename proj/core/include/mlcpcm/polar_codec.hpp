#pragma once

#include <span>
#include <vector>

#include "mlcpcm/constellation.hpp"

namespace mlcpcm {

/// x = u F^{(x)n} over GF(2), in place. Throws for non power-of-two sizes.
void polar_transform(std::span<Bit> bits);
std::vector<Bit> polar_encode(std::span<const Bit> u);

/// One binary component polar code; the CRC occupies the last crc_len
/// positions of the ascending information set.
struct ComponentCode {
    int n = 0;
    std::vector<int> info_set;
    int crc_len = 0;

    ComponentCode() = default;
    ComponentCode(int block_length, std::vector<int> info_indices, int crc_bits);

    int info_len() const { return static_cast<int>(info_set.size()); }
    int payload_len() const { return info_len() - crc_len; }
    std::vector<char> frozen_mask() const;
};

/// Source vector u: payload (+ CRC) on the information set, zeros elsewhere.
std::vector<Bit> place_payload(const ComponentCode& code, std::span<const Bit> payload);

/// polar_encode(place_payload(code, payload)).
std::vector<Bit> encode_component(const ComponentCode& code, std::span<const Bit> payload);

/// Payload bits read back from a decoded source vector.
std::vector<Bit> extract_payload(const ComponentCode& code, std::span<const Bit> u);

struct DecodeResult {
    std::vector<Bit> payload;
    std::vector<Bit> u;
    std::vector<Bit> codeword; // re-encoded x
    bool crc_ok = false;       // true when crc_len == 0
    double path_metric = 0.0;
};

/// Plain successive cancellation with min-sum check updates. LLR > 0 favors 0.
DecodeResult sc_decode(std::span<const double> llrs, const ComponentCode& code);

/// CRC-aided successive cancellation list decoder.
///
/// Path metrics use the hard-decision penalty (|LLR| added when a path's bit
/// disagrees with the sign of its LLR); check nodes use min-sum. Paths share
/// LLR and partial-sum arrays per layer until one of them writes, so a path
/// fork costs O(1) instead of O(N). Among the final list the best-metric path
/// passing the CRC wins, else the best-metric path with crc_ok = false.
///
/// An instance owns scratch memory; use one per thread.
class ListDecoder {
public:
    ListDecoder(int block_length, int list_size);

    int block_length() const { return n_; }
    int list_size() const { return list_size_; }

    DecodeResult decode(std::span<const double> llrs, const ComponentCode& code);

    /// Records, per decoded bit, the smallest metric among surviving paths.
    void set_trace(bool enabled) { trace_enabled_ = enabled; }
    const std::vector<double>& metric_trace() const { return trace_; }

private:
    struct Layer {
        int size = 0;
        std::vector<double> llr;      // list_size arrays of `size`
        std::vector<Bit> bits;        // list_size arrays of 2 * size (left | right)
        std::vector<int> llr_refs, bit_refs;
        std::vector<int> llr_free, bit_free;
    };

    void reset();
    int clone_path(int path);
    void kill_path(int path);
    double* writable_llr(int path, int layer);
    Bit* writable_bits(int path, int layer);
    const double* llr_of(int path, int layer) const;
    const Bit* bits_of(int path, int layer) const;
    void compute_llrs(int phase, std::span<const double> channel);
    void store_bit(int path, int phase, Bit bit);

    int n_;
    int depth_;
    int list_size_;
    std::vector<Layer> layers_;            // index 0 holds the final codeword
    std::vector<std::vector<int>> llr_idx; // [path][layer]
    std::vector<std::vector<int>> bit_idx; // [path][layer]
    std::vector<char> active_;
    std::vector<int> free_paths_;
    std::vector<double> metric_;
    std::vector<std::vector<Bit>> u_;
    bool trace_enabled_ = false;
    std::vector<double> trace_;
};

/// One-shot convenience wrapper around ListDecoder.
DecodeResult scl_decode(std::span<const double> llrs, const ComponentCode& code, int list_size);

} // namespace mlcpcm
