#include "mlcpcm/config.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mlcpcm {

using nlohmann::json;

namespace {

const char* const kKnownKeys[] = {"method", "m",          "n",          "k",    "rate", "list_size", "snr_db",
                                  "max_blocks", "max_errors", "seed", "eps",  "workers"};

template <class T>
T get_field(const json& doc, const char* key)
{
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config key '") + key + "': " + e.what());
    }
}

json config_json(const SimConfig& cfg)
{
    return json{{"method", to_string(cfg.method)},
                {"m", cfg.m},
                {"n", cfg.n},
                {"k", cfg.k},
                {"list_size", cfg.list_size},
                {"snr_db", cfg.snr_db},
                {"max_blocks", cfg.max_blocks},
                {"max_errors", cfg.max_errors},
                {"seed", cfg.seed},
                {"eps", cfg.eps},
                {"workers", cfg.workers}};
}

} // namespace

std::vector<double> snr_grid(double start, double stop, double step)
{
    if (!(step > 0.0) || !(stop >= start))
        throw std::invalid_argument("SNR grid needs step > 0 and stop >= start");
    std::vector<double> grid;
    for (long i = 0;; ++i) {
        const double s = start + i * step;
        if (s > stop + 1e-9)
            break;
        // Round away accumulated binary noise: 0.1 steps print as 0.1 steps.
        grid.push_back(std::round(s * 1e9) / 1e9);
    }
    return grid;
}

SimConfig parse_config(std::string_view json_text)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw std::invalid_argument("config must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
        bool known = false;
        for (const char* k : kKnownKeys)
            known = known || key == k;
        if (!known)
            throw std::invalid_argument("unknown config key '" + key + "'");
    }
    if (doc.contains("k") && doc.contains("rate"))
        throw std::invalid_argument("config sets both 'k' and 'rate'");

    SimConfig cfg;
    if (doc.contains("method"))
        cfg.method = parse_method(get_field<std::string>(doc, "method"));
    if (doc.contains("m"))
        cfg.m = get_field<int>(doc, "m");
    if (doc.contains("n"))
        cfg.n = get_field<int>(doc, "n");
    if (doc.contains("k"))
        cfg.k = get_field<int>(doc, "k");
    if (doc.contains("rate"))
        cfg.k = static_cast<int>(std::lround(cfg.m * cfg.n * get_field<double>(doc, "rate")));
    if (doc.contains("list_size"))
        cfg.list_size = get_field<int>(doc, "list_size");
    if (doc.contains("snr_db")) {
        const json& grid = doc.at("snr_db");
        if (grid.is_object())
            cfg.snr_db = snr_grid(get_field<double>(grid, "start"), get_field<double>(grid, "stop"),
                                  get_field<double>(grid, "step"));
        else
            cfg.snr_db = get_field<std::vector<double>>(doc, "snr_db");
    }
    if (doc.contains("max_blocks"))
        cfg.max_blocks = get_field<long long>(doc, "max_blocks");
    if (doc.contains("max_errors"))
        cfg.max_errors = get_field<long long>(doc, "max_errors");
    if (doc.contains("seed"))
        cfg.seed = get_field<std::uint64_t>(doc, "seed");
    if (doc.contains("eps"))
        cfg.eps = get_field<double>(doc, "eps");
    if (doc.contains("workers"))
        cfg.workers = get_field<int>(doc, "workers");
    cfg.validate();
    return cfg;
}

SimConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string config_to_json(const SimConfig& cfg) { return config_json(cfg).dump(2); }

std::string curve_to_csv(const SimCurve& curve)
{
    std::ostringstream out;
    out << "snr_db," << curve.metric << ",blocks,errors\n";
    out << std::setprecision(10);
    for (const auto& p : curve.points)
        out << p.snr_db << ',' << p.value << ',' << p.blocks << ',' << p.errors << '\n';
    return out.str();
}

std::string curve_to_json(const SimCurve& curve)
{
    json points = json::array();
    for (const auto& p : curve.points)
        points.push_back({{"snr_db", p.snr_db}, {curve.metric, p.value}, {"blocks", p.blocks}, {"errors", p.errors}});
    const json doc{{"metric", curve.metric},
                   {"points", points},
                   {"config", config_json(curve.config)},
                   {"wall_seconds", curve.wall_seconds},
                   {"warning", curve.warning}};
    return doc.dump(2);
}

} // namespace mlcpcm
