#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

namespace mlcpcm {

/// One row of the 64QAM/256QAM PDSCH MCS table.
struct McsEntry {
    int index = 0;
    int modulation_order = 2;
    double rate_x1024 = 0.0;
    double spectral_efficiency = 0.0;

    double code_rate() const { return rate_x1024 / 1024.0; }
    double sum_rate() const { return modulation_order * code_rate(); }

    /// K = round(m N R), the information bits (CRC included) of one frame.
    int info_bits(int block_length) const;
};

/// CSV with header `index,Q_m,rate_x1024,spectral_efficiency`. Rows must be
/// consecutive from 0, Q_m even in [2, 8], 0 < rate < 1024, and the listed
/// spectral efficiency must equal Q_m * rate / 1024 to four decimals.
std::vector<McsEntry> parse_mcs_table(std::string_view text);
std::vector<McsEntry> load_mcs_table(const std::filesystem::path& path);

/// Table compiled into the library.
const std::vector<McsEntry>& default_mcs_table();

} // namespace mlcpcm
