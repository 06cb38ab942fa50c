#include "mlcpcm/mlc_system.hpp"

#include <stdexcept>
#include <string>

namespace mlcpcm {

namespace {

void check_construction(const CodeConstruction& cons, const Constellation& c)
{
    if (cons.m != c.order())
        throw std::invalid_argument("construction has " + std::to_string(cons.m) + " levels but the constellation " +
                                    std::to_string(c.order()));
    if (static_cast<int>(cons.info_sets.size()) != cons.m || static_cast<int>(cons.crc_lengths.size()) != cons.m)
        throw std::invalid_argument("construction is missing per-level information sets");
}

} // namespace

std::vector<ComponentCode> component_codes(const CodeConstruction& cons)
{
    std::vector<ComponentCode> codes;
    for (int k = 0; k < cons.m; ++k)
        codes.emplace_back(cons.n, cons.info_sets[k], cons.crc_lengths[k]);
    return codes;
}

std::vector<Complex> map_codewords(std::span<const std::vector<Bit>> codewords, const Constellation& c)
{
    const int m = c.order();
    if (static_cast<int>(codewords.size()) != m)
        throw std::invalid_argument("expected one codeword row per level");
    const std::size_t n = codewords[0].size();
    std::vector<Complex> symbols(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t label = 0;
        for (int k = 0; k < m; ++k)
            label = (label << 1) | (codewords[k][i] & 1u);
        symbols[i] = c.point(label);
    }
    return symbols;
}

MlcFrame mlc_encode_frame(std::span<const std::vector<Bit>> payloads, const CodeConstruction& cons,
                          const Constellation& c)
{
    check_construction(cons, c);
    if (static_cast<int>(payloads.size()) != cons.m)
        throw std::invalid_argument("expected " + std::to_string(cons.m) + " payload vectors, got " +
                                    std::to_string(payloads.size()));
    MlcFrame frame;
    frame.payloads.assign(payloads.begin(), payloads.end());
    const auto codes = component_codes(cons);
    for (int k = 0; k < cons.m; ++k)
        frame.codewords.push_back(encode_component(codes[k], payloads[k]));
    frame.symbols = map_codewords(frame.codewords, c);
    return frame;
}

std::vector<Complex> mlc_encode(std::span<const std::vector<Bit>> payloads, const CodeConstruction& cons,
                                const Constellation& c)
{
    return mlc_encode_frame(payloads, cons, c).symbols;
}

MultistageDecoder::MultistageDecoder(CodeConstruction cons, Constellation c, int list_size)
    : cons_(std::move(cons)), c_(std::move(c)), codes_(component_codes(cons_)), decoder_(cons_.n, list_size)
{
    check_construction(cons_, c_);
}

std::vector<double> MultistageDecoder::level_llrs(int level, std::span<const Complex> y,
                                                  std::span<const double> noise_var,
                                                  std::span<const std::vector<Bit>> prefix_rows) const
{
    const std::size_t n = y.size();
    if (level < 0 || level >= cons_.m)
        throw std::invalid_argument("level out of range");
    if (n != static_cast<std::size_t>(cons_.n))
        throw std::invalid_argument("expected " + std::to_string(cons_.n) + " received symbols");
    if (noise_var.size() != 1 && noise_var.size() != n)
        throw std::invalid_argument("noise variance must be scalar or per symbol");
    if (static_cast<int>(prefix_rows.size()) < level)
        throw std::invalid_argument("missing decisions of earlier levels");

    std::vector<double> llrs(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t prefix = 0;
        for (int j = 0; j < level; ++j)
            prefix = (prefix << 1) | (prefix_rows[j][i] & 1u);
        const double var = noise_var.size() == 1 ? noise_var[0] : noise_var[i];
        llrs[i] = level_llr(c_, y[i], var, BitPrefix::packed(level + 1, prefix));
    }
    return llrs;
}

DecodeResult MultistageDecoder::decode_level(int level, std::span<const Complex> y, std::span<const double> noise_var,
                                             std::span<const std::vector<Bit>> prefix_rows)
{
    const ComponentCode& code = codes_[level];
    if (code.info_len() == 0) {
        // Nothing to decide: the frozen row is all zeros.
        DecodeResult out;
        out.u.assign(code.n, 0);
        out.codeword.assign(code.n, 0);
        out.crc_ok = true;
        return out;
    }
    const auto llrs = level_llrs(level, y, noise_var, prefix_rows);
    return decoder_.decode(llrs, code);
}

MultistageResult MultistageDecoder::decode(std::span<const Complex> y, std::span<const double> noise_var)
{
    MultistageResult out;
    out.frame_ok = true;
    for (int k = 0; k < cons_.m; ++k) {
        auto level = decode_level(k, y, noise_var, out.codewords);
        out.payloads.push_back(std::move(level.payload));
        out.codewords.push_back(std::move(level.codeword));
        out.crc_ok.push_back(level.crc_ok ? 1 : 0);
        out.frame_ok = out.frame_ok && level.crc_ok;
    }
    return out;
}

MultistageResult MultistageDecoder::decode(std::span<const Complex> y, double noise_var)
{
    const double var[1] = {noise_var};
    return decode(y, std::span<const double>(var));
}

MultistageResult multistage_decode(std::span<const Complex> y, double noise_var, const CodeConstruction& cons,
                                   const Constellation& c, int list_size)
{
    MultistageDecoder decoder(cons, c, list_size);
    return decoder.decode(y, noise_var);
}

} // namespace mlcpcm
