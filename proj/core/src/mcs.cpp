#include "mlcpcm/mcs.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace mlcpcm {

namespace detail {
extern const std::string_view kEmbeddedMcsTable;
}

namespace {

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ','))
        out.push_back(field);
    return out;
}

double parse_number(const std::string& field, int line_no)
{
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(field, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != field.size() || !std::isfinite(value))
        throw std::runtime_error("MCS table line " + std::to_string(line_no) + ": bad number '" + field + "'");
    return value;
}

} // namespace

int McsEntry::info_bits(int block_length) const
{
    return static_cast<int>(std::lround(modulation_order * block_length * code_rate()));
}

std::vector<McsEntry> parse_mcs_table(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    bool header = false;
    std::vector<McsEntry> table;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        if (!header) {
            if (line != "index,Q_m,rate_x1024,spectral_efficiency")
                throw std::runtime_error("MCS table: unexpected header '" + line + "'");
            header = true;
            continue;
        }
        const auto fields = split_csv(line);
        if (fields.size() != 4)
            throw std::runtime_error("MCS table line " + std::to_string(line_no) + ": expected 4 columns");
        McsEntry e;
        e.index = static_cast<int>(parse_number(fields[0], line_no));
        e.modulation_order = static_cast<int>(parse_number(fields[1], line_no));
        e.rate_x1024 = parse_number(fields[2], line_no);
        e.spectral_efficiency = parse_number(fields[3], line_no);
        const auto where = "MCS table line " + std::to_string(line_no) + ": ";
        if (e.index != static_cast<int>(table.size()))
            throw std::runtime_error(where + "indices must run 0, 1, 2, ...");
        if (e.modulation_order < 2 || e.modulation_order > 8 || e.modulation_order % 2 != 0)
            throw std::runtime_error(where + "Q_m must be 2, 4, 6 or 8");
        if (!(e.rate_x1024 > 0.0 && e.rate_x1024 < 1024.0))
            throw std::runtime_error(where + "rate must lie in (0, 1024)");
        if (std::abs(e.sum_rate() - e.spectral_efficiency) > 5.01e-5)
            throw std::runtime_error(where + "spectral efficiency disagrees with Q_m * rate / 1024");
        table.push_back(e);
    }
    if (table.empty())
        throw std::runtime_error("MCS table is empty");
    return table;
}

std::vector<McsEntry> load_mcs_table(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open MCS table " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_mcs_table(buffer.str());
}

const std::vector<McsEntry>& default_mcs_table()
{
    static const std::vector<McsEntry> table = parse_mcs_table(detail::kEmbeddedMcsTable);
    return table;
}

} // namespace mlcpcm
