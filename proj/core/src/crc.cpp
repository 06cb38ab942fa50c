#include "mlcpcm/crc.hpp"

namespace mlcpcm {

std::uint16_t crc16(std::span<const Bit> bits)
{
    std::uint16_t reg = 0;
    for (Bit b : bits) {
        const bool feedback = ((reg >> 15) & 1u) != (b & 1u);
        reg = static_cast<std::uint16_t>(reg << 1);
        if (feedback)
            reg ^= kCrc16Poly;
    }
    return reg;
}

std::vector<Bit> crc_attach(std::span<const Bit> payload)
{
    std::vector<Bit> out(payload.begin(), payload.end());
    const std::uint16_t parity = crc16(payload);
    for (int i = kCrcLength - 1; i >= 0; --i)
        out.push_back(static_cast<Bit>((parity >> i) & 1u));
    return out;
}

bool crc_check(std::span<const Bit> bits)
{
    if (bits.size() < static_cast<std::size_t>(kCrcLength))
        return false;
    // Running the register over payload and parity leaves zero.
    return crc16(bits) == 0;
}

} // namespace mlcpcm
