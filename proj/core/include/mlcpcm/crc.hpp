#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mlcpcm/constellation.hpp"

namespace mlcpcm {

// 5G gCRC16: D^16 + D^12 + D^5 + 1, zero initial register, MSB first.
inline constexpr int kCrcLength = 16;
inline constexpr std::uint16_t kCrc16Poly = 0x1021;

std::uint16_t crc16(std::span<const Bit> bits);

/// payload followed by its 16 parity bits, MSB first.
std::vector<Bit> crc_attach(std::span<const Bit> payload);

/// True when the trailing 16 bits are the parity of the rest.
bool crc_check(std::span<const Bit> bits);

} // namespace mlcpcm
