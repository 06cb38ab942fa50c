#pragma once

#include <span>
#include <vector>

#include "mlcpcm/constellation.hpp"
#include "mlcpcm/construction.hpp"
#include "mlcpcm/polar_codec.hpp"

namespace mlcpcm {

/// Component codes of a construction, level by level.
std::vector<ComponentCode> component_codes(const CodeConstruction& cons);

/// Transmitter state of one frame. Row k of `codewords` is v_{kN+1..(k+1)N};
/// bit k of symbol i is codewords[k][i].
struct MlcFrame {
    std::vector<std::vector<Bit>> payloads;
    std::vector<std::vector<Bit>> codewords;
    std::vector<Complex> symbols;
};

/// Per level: CRC (when the policy asks for one), placement on A_k, polar
/// transform; then symbol i = phi(v_k[i] for k = 1..m).
MlcFrame mlc_encode_frame(std::span<const std::vector<Bit>> payloads, const CodeConstruction& cons,
                          const Constellation& c);

std::vector<Complex> mlc_encode(std::span<const std::vector<Bit>> payloads, const CodeConstruction& cons,
                                const Constellation& c);

/// Symbols from already encoded rows.
std::vector<Complex> map_codewords(std::span<const std::vector<Bit>> codewords, const Constellation& c);

struct MultistageResult {
    std::vector<std::vector<Bit>> payloads;
    std::vector<std::vector<Bit>> codewords; // re-encoded decisions
    std::vector<char> crc_ok;
    bool frame_ok = false; // every level passed its CRC (always true without CRCs)
};

/// Multistage receiver: level k is demapped conditioned on the re-encoded
/// decisions of levels 1..k-1, then list decoded.
class MultistageDecoder {
public:
    MultistageDecoder(CodeConstruction cons, Constellation c, int list_size);

    const CodeConstruction& construction() const { return cons_; }
    const Constellation& constellation() const { return c_; }
    int list_size() const { return decoder_.list_size(); }

    /// LLRs of `level` (0-based); prefix_rows holds at least `level` rows.
    /// `noise_var` has one entry per symbol, or a single entry for all.
    std::vector<double> level_llrs(int level, std::span<const Complex> y, std::span<const double> noise_var,
                                   std::span<const std::vector<Bit>> prefix_rows) const;

    DecodeResult decode_level(int level, std::span<const Complex> y, std::span<const double> noise_var,
                              std::span<const std::vector<Bit>> prefix_rows);

    MultistageResult decode(std::span<const Complex> y, double noise_var);
    MultistageResult decode(std::span<const Complex> y, std::span<const double> noise_var);

private:
    CodeConstruction cons_;
    Constellation c_;
    std::vector<ComponentCode> codes_;
    ListDecoder decoder_;
};

/// One-shot wrapper around MultistageDecoder.
MultistageResult multistage_decode(std::span<const Complex> y, double noise_var, const CodeConstruction& cons,
                                   const Constellation& c, int list_size);

} // namespace mlcpcm
