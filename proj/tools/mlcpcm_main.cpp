// mlcpcm: command-line front end for analysis, construction and simulation.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mlcpcm/config.hpp"
#include "mlcpcm/construction.hpp"
#include "mlcpcm/mcs.hpp"
#include "mlcpcm/mp_analysis.hpp"
#include "mlcpcm/rank_sequence.hpp"
#include "mlcpcm/sim.hpp"

using namespace mlcpcm;

namespace {

struct Common {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out = "csv";
    std::string output_path;
    std::optional<int> workers;
};

void add_common(CLI::App* cmd, Common& c)
{
    cmd->add_option("--config", c.config_path, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", c.seed, "RNG seed");
    cmd->add_option("--out", c.out, "output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("-o,--output", c.output_path, "write to this file instead of stdout");
    cmd->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
}

// "a:b:s" is an inclusive range, anything else a comma-separated list.
std::vector<double> parse_snr_list(const std::string& text)
{
    const auto colon = std::count(text.begin(), text.end(), ':');
    if (colon == 2) {
        const auto p1 = text.find(':');
        const auto p2 = text.find(':', p1 + 1);
        return snr_grid(std::stod(text.substr(0, p1)), std::stod(text.substr(p1 + 1, p2 - p1 - 1)),
                        std::stod(text.substr(p2 + 1)));
    }
    if (colon != 0)
        throw std::invalid_argument("SNR list must be 'start:stop:step' or 'a,b,c'");
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(std::stod(item));
    return out;
}

void emit(const Common& c, const std::string& text)
{
    if (c.output_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.output_path);
    if (!f)
        throw std::runtime_error("cannot write " + c.output_path);
    f << text;
}

std::string fmt(double v, int digits = 12)
{
    std::ostringstream s;
    s << std::setprecision(digits) << v;
    return s.str();
}

struct SimOverrides {
    std::optional<std::string> method;
    std::optional<int> m, n, k, list_size;
    std::optional<double> rate, eps;
    std::optional<std::string> snr;
    std::optional<long long> max_blocks, max_errors;
};

void add_sim_overrides(CLI::App* cmd, SimOverrides& o)
{
    cmd->add_option("--method", o.method, "rf1, rf2 or ga")->check(CLI::IsMember({"rf1", "rf2", "ga"}));
    cmd->add_option("--m", o.m, "bits per symbol");
    cmd->add_option("--n", o.n, "component block length");
    cmd->add_option("--k", o.k, "information bits per frame");
    cmd->add_option("--rate", o.rate, "code rate R, K = round(m N R)");
    cmd->add_option("--list", o.list_size, "SCL list size");
    cmd->add_option("--eps", o.eps, "RF-II target BLER");
    cmd->add_option("--snr-db", o.snr, "SNR grid, 'a:b:s' or 'a,b,c'");
    cmd->add_option("--max-blocks", o.max_blocks, "blocks per point");
    cmd->add_option("--max-errors", o.max_errors, "block errors per point");
}

SimConfig resolve_config(const Common& c, const SimOverrides& o)
{
    SimConfig cfg = c.config_path.empty() ? SimConfig{} : load_config(c.config_path);
    if (o.method)
        cfg.method = parse_method(*o.method);
    if (o.m)
        cfg.m = *o.m;
    if (o.n)
        cfg.n = *o.n;
    if (o.k && o.rate)
        throw std::invalid_argument("--k and --rate are exclusive");
    if (o.k)
        cfg.k = *o.k;
    if (o.rate)
        cfg.k = static_cast<int>(std::lround(cfg.m * cfg.n * *o.rate));
    if (o.list_size)
        cfg.list_size = *o.list_size;
    if (o.eps)
        cfg.eps = *o.eps;
    if (o.snr)
        cfg.snr_db = parse_snr_list(*o.snr);
    if (o.max_blocks)
        cfg.max_blocks = *o.max_blocks;
    if (o.max_errors)
        cfg.max_errors = *o.max_errors;
    if (c.seed)
        cfg.seed = *c.seed;
    if (c.workers)
        cfg.workers = *c.workers;
    return cfg;
}

std::string curve_output(const Common& c, const SimCurve& curve)
{
    return c.out == "json" ? curve_to_json(curve) + "\n" : curve_to_csv(curve);
}

std::vector<int> parse_index_list(const std::string& text)
{
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(std::stoi(item));
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Multilevel polar-coded modulation: analysis, construction and link simulation"};
    app.require_subcommand(1);

    // analyze
    Common analyze_common;
    std::vector<int> analyze_m{4};
    std::string analyze_snr = "0:20:5";
    auto* analyze = app.add_subcommand("analyze", "per-level capacity and dispersion (CSV: m,snr_db,k,capacity,dispersion)");
    add_common(analyze, analyze_common);
    analyze->add_option("--m", analyze_m, "bits per symbol, repeatable");
    analyze->add_option("--snr-db", analyze_snr, "SNR grid, 'a:b:s' or 'a,b,c'");

    // construct
    Common construct_common;
    SimOverrides construct_opts;
    std::optional<double> construct_snr;
    std::string sequence_path;
    auto* construct = app.add_subcommand("construct", "per-level information sets");
    add_common(construct, construct_common);
    construct->add_option("--method", construct_opts.method, "rf1, rf2 or ga")
        ->check(CLI::IsMember({"rf1", "rf2", "ga"}));
    construct->add_option("--m", construct_opts.m, "bits per symbol");
    construct->add_option("--n", construct_opts.n, "component block length");
    construct->add_option("--k", construct_opts.k, "information bits");
    construct->add_option("--rate", construct_opts.rate, "code rate R, K = round(m N R)");
    construct->add_option("--eps", construct_opts.eps, "RF-II target BLER");
    construct->add_option("--snr-db", construct_snr, "actual channel SNR (ga only)");
    construct->add_option("--sequence", sequence_path, "rank sequence file (default: built-in)")
        ->check(CLI::ExistingFile);

    // bler
    Common bler_common;
    SimOverrides bler_opts;
    auto* bler = app.add_subcommand("bler", "Monte Carlo BLER over AWGN");
    add_common(bler, bler_common);
    add_sim_overrides(bler, bler_opts);

    // min-snr
    Common minsnr_common;
    SimOverrides minsnr_opts;
    std::optional<int> minsnr_mcs;
    double minsnr_target = 0.1;
    double minsnr_step = 0.25;
    auto* minsnr = app.add_subcommand("min-snr", "minimum SNR reaching a BLER target");
    add_common(minsnr, minsnr_common);
    add_sim_overrides(minsnr, minsnr_opts);
    minsnr->add_option("--mcs", minsnr_mcs, "MCS index (overrides --m/--k)");
    minsnr->add_option("--target-bler", minsnr_target, "BLER target");
    minsnr->add_option("--step-db", minsnr_step, "grid step");

    // throughput
    Common tp_common;
    SimOverrides tp_opts;
    std::string tp_mcs = "0,4,9,14,19,24,27";
    std::string mcs_path;
    double lut_step = 0.5;
    double lut_span = 6.0;
    long long lut_blocks = 2000;
    long long lut_errors = 50;
    double bler_limit = 0.1;
    auto* throughput = app.add_subcommand("throughput", "AMC throughput over block Rayleigh fading");
    add_common(throughput, tp_common);
    add_sim_overrides(throughput, tp_opts);
    throughput->add_option("--mcs", tp_mcs, "comma-separated MCS indices");
    throughput->add_option("--mcs-table", mcs_path, "MCS table CSV (default: built-in)")->check(CLI::ExistingFile);
    throughput->add_option("--lut-step", lut_step, "BLER table SNR step");
    throughput->add_option("--lut-span", lut_span, "BLER table span above the capacity SNR");
    throughput->add_option("--lut-blocks", lut_blocks, "BLER table blocks per point");
    throughput->add_option("--lut-errors", lut_errors, "BLER table errors per point");
    throughput->add_option("--bler-limit", bler_limit, "MCS selection BLER constraint");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*analyze) {
            std::ostringstream out;
            const auto grid = parse_snr_list(analyze_snr);
            if (analyze_common.out == "json")
                out << "[\n";
            bool first = true;
            if (analyze_common.out == "csv")
                out << "m,snr_db,k,capacity,dispersion\n";
            for (int m : analyze_m) {
                const Constellation c = make_constellation(m);
                for (double snr : grid)
                    for (const auto& s : analyze_levels(c, snr)) {
                        if (analyze_common.out == "csv") {
                            out << m << ',' << fmt(snr) << ',' << s.level << ',' << fmt(s.capacity, 15) << ','
                                << fmt(s.dispersion, 15) << '\n';
                        } else {
                            out << (first ? "" : ",\n") << "  {\"m\": " << m << ", \"snr_db\": " << fmt(snr)
                                << ", \"k\": " << s.level << ", \"capacity\": " << fmt(s.capacity, 15)
                                << ", \"dispersion\": " << fmt(s.dispersion, 15) << "}";
                            first = false;
                        }
                    }
            }
            if (analyze_common.out == "json")
                out << "\n]\n";
            emit(analyze_common, out.str());
        } else if (*construct) {
            SimConfig cfg = resolve_config(construct_common, construct_opts);
            const RankSequence seq =
                sequence_path.empty() ? default_sequence(cfg.n) : load_rank_sequence(sequence_path, cfg.n);
            CodeConstruction cons;
            switch (cfg.method) {
            case ConstructionMethod::RateFillCapacity:
                cons = construct_rf1(cfg.m, cfg.k, cfg.n, seq);
                break;
            case ConstructionMethod::RateFillFiniteLength:
                cons = construct_rf2(cfg.m, cfg.k, cfg.n, {cfg.eps, ErrorScope::System}, seq);
                break;
            case ConstructionMethod::GaussianApproximation:
                if (!construct_snr)
                    throw std::invalid_argument("--method ga needs --snr-db");
                cons = construct_ga(make_constellation(cfg.m), cfg.k, cfg.n, *construct_snr);
                break;
            }
            std::ostringstream out;
            if (construct_common.out == "csv") {
                out << "# method=" << to_string(cons.method) << " m=" << cons.m << " n=" << cons.n
                    << " k=" << cons.total_bits;
                if (cons.design_snr_db)
                    out << " design_snr_db=" << fmt(*cons.design_snr_db);
                out << "\nlevel,value,info_bits,crc_bits,info_set\n";
                for (int k = 0; k < cons.m; ++k) {
                    out << k + 1 << ',' << fmt(cons.level_values[k]) << ',' << cons.info_bits(k) << ','
                        << cons.crc_lengths[k] << ',';
                    for (std::size_t j = 0; j < cons.info_sets[k].size(); ++j)
                        out << (j ? " " : "") << cons.info_sets[k][j];
                    out << '\n';
                }
            } else {
                out << "{\n  \"method\": \"" << to_string(cons.method) << "\", \"m\": " << cons.m
                    << ", \"n\": " << cons.n << ", \"k\": " << cons.total_bits;
                if (cons.design_snr_db)
                    out << ", \"design_snr_db\": " << fmt(*cons.design_snr_db);
                out << ",\n  \"levels\": [\n";
                for (int k = 0; k < cons.m; ++k) {
                    out << "    {\"level\": " << k + 1 << ", \"value\": " << fmt(cons.level_values[k])
                        << ", \"info_bits\": " << cons.info_bits(k) << ", \"crc_bits\": " << cons.crc_lengths[k]
                        << ", \"info_set\": [";
                    for (std::size_t j = 0; j < cons.info_sets[k].size(); ++j)
                        out << (j ? ", " : "") << cons.info_sets[k][j];
                    out << "]}" << (k + 1 < cons.m ? "," : "") << '\n';
                }
                out << "  ]\n}\n";
            }
            emit(construct_common, out.str());
        } else if (*bler) {
            const SimConfig cfg = resolve_config(bler_common, bler_opts);
            emit(bler_common, curve_output(bler_common, run_bler(cfg)));
        } else if (*minsnr) {
            SimConfig cfg = resolve_config(minsnr_common, minsnr_opts);
            if (minsnr_mcs) {
                const auto& table = default_mcs_table();
                if (*minsnr_mcs < 0 || *minsnr_mcs >= static_cast<int>(table.size()))
                    throw std::invalid_argument("MCS index out of range");
                cfg.m = table[*minsnr_mcs].modulation_order;
                cfg.k = table[*minsnr_mcs].info_bits(cfg.n);
            }
            cfg.validate();
            RequiredSnrOptions opts;
            opts.target_bler = minsnr_target;
            opts.step_db = minsnr_step;
            opts.stop = cfg.stopping();
            opts.seed = cfg.seed;
            opts.workers = cfg.workers;
            const auto r = min_required_snr(cfg.method, cfg.m, cfg.k, cfg.n, cfg.list_size, cfg.eps, opts);
            SimCurve curve;
            curve.metric = "bler";
            curve.config = cfg;
            curve.points = r.probes;
            curve.warning = r.warning;
            std::ostringstream out;
            if (minsnr_common.out == "csv")
                out << "# required_snr_db=" << fmt(r.snr_db) << " target_bler=" << minsnr_target
                    << (r.warning ? " warning=non-monotone" : "") << '\n'
                    << curve_to_csv(curve);
            else
                out << "{\"required_snr_db\": " << fmt(r.snr_db) << ", \"target_bler\": " << minsnr_target
                    << ", \"probes\": " << curve_to_json(curve) << "}\n";
            emit(minsnr_common, out.str());
        } else if (*throughput) {
            SimConfig cfg = resolve_config(tp_common, tp_opts);
            const auto full = mcs_path.empty() ? default_mcs_table() : load_mcs_table(mcs_path);
            std::vector<McsEntry> table;
            for (int idx : parse_index_list(tp_mcs)) {
                if (idx < 0 || idx >= static_cast<int>(full.size()))
                    throw std::invalid_argument("MCS index out of range: " + std::to_string(idx));
                table.push_back(full[idx]);
            }
            std::vector<BlerLut> luts;
            for (const auto& e : table) {
                const double cap_snr = solve_snr_capacity(make_constellation(e.modulation_order), e.sum_rate());
                const double start = std::floor(cap_snr / lut_step) * lut_step;
                const auto grid = snr_grid(start, start + lut_span, lut_step);
                luts.push_back(build_bler_lut(cfg.method, e, cfg.n, cfg.list_size, cfg.eps, grid,
                                              {lut_blocks, lut_errors}, cfg.seed, cfg.workers));
                std::cerr << "BLER table for MCS " << e.index << " ready\n";
            }
            emit(tp_common, curve_output(tp_common, run_throughput(cfg, table, luts, bler_limit)));
        }
    } catch (const std::exception& e) {
        std::cerr << "mlcpcm: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
