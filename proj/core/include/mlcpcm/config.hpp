#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mlcpcm/sim.hpp"

namespace mlcpcm {

/// Inclusive grid start, start + step, ... up to stop (with 1e-9 slack).
std::vector<double> snr_grid(double start, double stop, double step);

/// Reads a JSON object whose keys mirror SimConfig:
///
///   method      "rf1" | "rf2" | "ga"
///   m, n, k     integers; "rate" (code rate R) may replace k, k = round(m n R)
///   list_size   integer
///   snr_db      array of numbers, or {"start": a, "stop": b, "step": s}
///   max_blocks, max_errors, seed, workers   integers
///   eps         number
///
/// Missing keys keep their defaults; unknown keys are rejected. The result
/// is validated.
SimConfig parse_config(std::string_view json_text);
SimConfig load_config(const std::filesystem::path& path);

std::string config_to_json(const SimConfig& cfg);

/// Header `snr_db,<metric>,blocks,errors`, one row per point.
std::string curve_to_csv(const SimCurve& curve);

/// {"metric", "points": [...], "config": {...}, "wall_seconds", "warning"}.
std::string curve_to_json(const SimCurve& curve);

} // namespace mlcpcm
