#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mlcpcm/construction.hpp"
#include "mlcpcm/mcs.hpp"
#include "mlcpcm/mlc_system.hpp"

namespace mlcpcm {

using Rng = std::mt19937_64;

/// SNRs at or above this are treated as noiseless.
inline constexpr double kNoiselessSnrDb = 200.0;

/// Independent generator of one frame, keyed by (seed, stream, frame). The
/// stream is normally the SNR point, so every frame owns its randomness no
/// matter which worker runs it.
Rng frame_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t frame);

/// Circularly symmetric complex Gaussian samples of total variance N0.
std::vector<Complex> complex_noise(std::size_t count, double noise_var, Rng& rng);

/// y = x + n with N0 = 10^(-snr/10) for unit-energy symbols.
std::vector<Complex> awgn_transmit(std::span<const Complex> symbols, double snr_db, Rng& rng);

std::vector<Bit> random_bits(std::size_t count, Rng& rng);

struct StoppingRule {
    long long max_blocks = 100000;
    long long max_errors = 100;
};

struct BlerEstimate {
    long long blocks = 0;
    long long errors = 0;
    double bler() const { return blocks > 0 ? static_cast<double>(errors) / blocks : 0.0; }
};

/// One simulated frame; returns true on a block error.
using FrameTrial = std::function<bool(Rng&)>;
/// Makes the trial of one worker. Trials of different workers run
/// concurrently, so each must own its scratch state.
using TrialFactory = std::function<FrameTrial()>;

/// Runs frames 0, 1, 2, ... with frame_rng(seed, stream, frame) until the
/// stopping rule fires. Frames are evaluated in parallel batches and counted
/// strictly in frame order, so the estimate does not depend on `workers`.
BlerEstimate estimate_bler(const TrialFactory& make_trial, const StoppingRule& stop, std::uint64_t seed,
                           std::uint64_t stream, int workers = 1);

/// Construction of `method` for K bits on m levels of length N. GA needs the
/// actual channel SNR; the rate-filling methods ignore it.
CodeConstruction build_construction(ConstructionMethod method, int m, int total_bits, int block_length, double eps,
                                    double snr_db = 0.0);

/// Sends one random frame through AWGN (or block Rayleigh fading with `h`)
/// and decodes it; true when any payload bit is wrong.
bool simulate_frame(MultistageDecoder& decoder, double snr_db, Rng& rng);
bool simulate_faded_frame(MultistageDecoder& decoder, double snr_db, Complex h, Rng& rng);

struct SimConfig {
    ConstructionMethod method = ConstructionMethod::RateFillFiniteLength;
    int m = 4;
    int n = 256;
    int k = 512;
    int list_size = 8;
    std::vector<double> snr_db{0.0};
    long long max_blocks = 100000;
    long long max_errors = 100;
    std::uint64_t seed = 1;
    double eps = 0.1;
    int workers = 1;

    StoppingRule stopping() const { return {max_blocks, max_errors}; }
    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct SimPoint {
    double snr_db = 0.0;
    double value = 0.0; // BLER or throughput
    long long blocks = 0;
    long long errors = 0;
};

struct SimCurve {
    std::string metric; // "bler" or "throughput"
    std::vector<SimPoint> points;
    SimConfig config;
    double wall_seconds = 0.0;
    bool warning = false;
};

/// BLER per SNR point. Rate-filling constructions are built once; GA is
/// rebuilt at each SNR because it needs the channel state.
SimCurve run_bler(const SimConfig& cfg);

struct RequiredSnrOptions {
    double target_bler = 0.1;
    double step_db = 0.25;
    int max_probes = 80;
    StoppingRule stop;
    std::uint64_t seed = 1;
    int workers = 1;
};

struct RequiredSnr {
    double snr_db = 0.0;
    bool warning = false;         // estimates stayed non-monotone after a retry
    std::vector<SimPoint> probes; // grid points actually simulated
};

/// Walks a step_db grid from the capacity SNR of K/N until the BLER crosses
/// the target, then interpolates log BLER between the two bracketing points.
/// A zero-error point counts as half an error. Probes at the same SNR use
/// the same random stream, so two methods see identical noise and payloads.
RequiredSnr min_required_snr(ConstructionMethod method, int m, int total_bits, int block_length, int list_size,
                             double eps, const RequiredSnrOptions& opts);
RequiredSnr min_required_snr(ConstructionMethod method, const McsEntry& mcs, int block_length, int list_size,
                             double eps, const RequiredSnrOptions& opts);

/// Measured BLER of one MCS on an SNR grid.
struct BlerLut {
    std::vector<double> snr_db;
    std::vector<double> bler;

    /// 1 below the grid, the last value above it, log-linear in between.
    double predict(double snr_db) const;
};

BlerLut build_bler_lut(ConstructionMethod method, const McsEntry& mcs, int block_length, int list_size, double eps,
                       std::span<const double> grid, const StoppingRule& stop, std::uint64_t seed, int workers);

/// Position in `table` maximizing m R (1 - p) over entries whose predicted
/// BLER p is at most `bler_limit`; position 0 when none qualifies.
std::size_t select_mcs(std::span<const McsEntry> table, std::span<const BlerLut> luts, double snr_db,
                       double bler_limit = 0.1);

/// AMC throughput in information bits per symbol over block Rayleigh
/// fading: cfg.snr_db are mean SNRs and cfg.max_blocks the fading blocks per
/// point. Each block draws h ~ CN(0, 1), picks an MCS at SNR + 10log10|h|^2
/// and simulates one frame with perfect channel knowledge at the receiver.
/// cfg.m, cfg.k and cfg.max_errors are ignored.
SimCurve run_throughput(const SimConfig& cfg, std::span<const McsEntry> table, std::span<const BlerLut> luts,
                        double bler_limit = 0.1);

} // namespace mlcpcm
