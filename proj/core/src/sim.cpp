#include "mlcpcm/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <memory>
#include <stdexcept>
#include <thread>

namespace mlcpcm {

namespace {

struct FrameOutcome {
    bool error = false;
    double delivered = 0.0;
};

using FrameJob = std::function<FrameOutcome(long long)>;

// Evaluates frames in batches across workers and hands the outcomes to
// `accept` in frame order; `accept` returns false to stop.
void run_frames(const std::function<FrameJob()>& make_job, int workers, long long max_frames,
                const std::function<bool(const FrameOutcome&)>& accept)
{
    workers = std::max(1, workers);
    std::vector<FrameJob> jobs;
    for (int w = 0; w < workers; ++w)
        jobs.push_back(make_job());
    const long long batch = std::max<long long>(16, 8LL * workers);
    std::vector<FrameOutcome> results;
    for (long long start = 0; start < max_frames; start += batch) {
        const long long count = std::min(batch, max_frames - start);
        results.assign(count, {});
        if (workers == 1) {
            for (long long i = 0; i < count; ++i)
                results[i] = jobs[0](start + i);
        } else {
            std::vector<std::exception_ptr> failures(workers);
            std::vector<std::thread> threads;
            for (int w = 0; w < workers; ++w)
                threads.emplace_back([&, w] {
                    try {
                        for (long long i = w; i < count; i += workers)
                            results[i] = jobs[w](start + i);
                    } catch (...) {
                        failures[w] = std::current_exception();
                    }
                });
            for (auto& t : threads)
                t.join();
            for (const auto& f : failures)
                if (f)
                    std::rethrow_exception(f);
        }
        for (long long i = 0; i < count; ++i)
            if (!accept(results[i]))
                return;
    }
}

double elapsed_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool payloads_differ(std::span<const std::vector<Bit>> sent, std::span<const std::vector<Bit>> got)
{
    for (std::size_t k = 0; k < sent.size(); ++k)
        if (sent[k] != got[k])
            return true;
    return false;
}

std::vector<std::vector<Bit>> random_payloads(const CodeConstruction& cons, Rng& rng)
{
    std::vector<std::vector<Bit>> payloads;
    for (int k = 0; k < cons.m; ++k)
        payloads.push_back(random_bits(cons.payload_bits(k), rng));
    return payloads;
}

Complex rayleigh_coefficient(Rng& rng)
{
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    const double re = gauss(rng);
    const double im = gauss(rng);
    return {re, im};
}

void check_common(int n, int list_size, int workers)
{
    if (!is_power_of_two(n))
        throw std::invalid_argument("n must be a power of two");
    if (!is_power_of_two(list_size))
        throw std::invalid_argument("list_size must be a power of two");
    if (workers < 1)
        throw std::invalid_argument("workers must be at least 1");
}

void check_stopping(const StoppingRule& stop)
{
    if (stop.max_blocks < 1)
        throw std::invalid_argument("max_blocks must be at least 1");
    if (stop.max_errors < 1)
        throw std::invalid_argument("max_errors must be at least 1");
}

double log_bler(const SimPoint& p) { return std::log(p.errors > 0 ? p.value : 0.5 / p.blocks); }

} // namespace

Rng frame_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t frame)
{
    const auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
    const auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    std::seed_seq seq{lo(seed), hi(seed), lo(stream), hi(stream), lo(frame), hi(frame)};
    return Rng(seq);
}

std::vector<Complex> complex_noise(std::size_t count, double noise_var, Rng& rng)
{
    std::normal_distribution<double> gauss(0.0, std::sqrt(noise_var / 2.0));
    std::vector<Complex> out(count);
    for (auto& z : out) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        z = {re, im};
    }
    return out;
}

std::vector<Complex> awgn_transmit(std::span<const Complex> symbols, double snr_db, Rng& rng)
{
    std::vector<Complex> y(symbols.begin(), symbols.end());
    if (snr_db >= kNoiselessSnrDb)
        return y;
    const auto noise = complex_noise(y.size(), noise_variance(snr_db), rng);
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] += noise[i];
    return y;
}

std::vector<Bit> random_bits(std::size_t count, Rng& rng)
{
    std::vector<Bit> bits(count);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < count; ++i) {
        if (i % 64 == 0)
            word = rng();
        bits[i] = static_cast<Bit>(word & 1u);
        word >>= 1;
    }
    return bits;
}

BlerEstimate estimate_bler(const TrialFactory& make_trial, const StoppingRule& stop, std::uint64_t seed,
                           std::uint64_t stream, int workers)
{
    check_stopping(stop);
    BlerEstimate est;
    const auto make_job = [&]() -> FrameJob {
        return [trial = make_trial(), seed, stream](long long frame) {
            Rng rng = frame_rng(seed, stream, static_cast<std::uint64_t>(frame));
            return FrameOutcome{trial(rng), 0.0};
        };
    };
    run_frames(make_job, workers, stop.max_blocks, [&](const FrameOutcome& o) {
        ++est.blocks;
        est.errors += o.error ? 1 : 0;
        return est.errors < stop.max_errors && est.blocks < stop.max_blocks;
    });
    return est;
}

CodeConstruction build_construction(ConstructionMethod method, int m, int total_bits, int block_length, double eps,
                                    double snr_db)
{
    switch (method) {
    case ConstructionMethod::RateFillCapacity:
        return construct_rf1(m, total_bits, block_length, default_sequence(block_length));
    case ConstructionMethod::RateFillFiniteLength:
        return construct_rf2(m, total_bits, block_length, FiniteLengthTarget{eps, ErrorScope::System},
                             default_sequence(block_length));
    case ConstructionMethod::GaussianApproximation:
        return construct_ga(make_constellation(m), total_bits, block_length, snr_db);
    }
    throw std::invalid_argument("unknown construction method");
}

bool simulate_frame(MultistageDecoder& decoder, double snr_db, Rng& rng)
{
    return simulate_faded_frame(decoder, snr_db, Complex(1.0, 0.0), rng);
}

bool simulate_faded_frame(MultistageDecoder& decoder, double snr_db, Complex h, Rng& rng)
{
    const CodeConstruction& cons = decoder.construction();
    const bool noiseless = snr_db >= kNoiselessSnrDb;
    const double n0 = noise_variance(std::min(snr_db, kNoiselessSnrDb));
    // Noise first, so that constructions with different payload sizes still
    // see the same channel for the same frame.
    const auto noise = noiseless ? std::vector<Complex>(cons.n) : complex_noise(cons.n, n0, rng);
    const auto payloads = random_payloads(cons, rng);
    const auto frame = mlc_encode_frame(payloads, cons, decoder.constellation());

    const bool flat = h == Complex(1.0, 0.0);
    const double gain = std::max(std::norm(h), 1e-30);
    std::vector<Complex> y(cons.n);
    for (int i = 0; i < cons.n; ++i)
        y[i] = flat ? frame.symbols[i] + noise[i] : (h * frame.symbols[i] + noise[i]) / h;
    const auto result = decoder.decode(y, flat ? n0 : n0 / gain);
    return payloads_differ(payloads, result.payloads);
}

void SimConfig::validate() const
{
    if (m != 1 && (m < 2 || m > 8 || m % 2 != 0))
        throw std::invalid_argument("m must be 1, 2, 4, 6 or 8");
    check_common(n, list_size, workers);
    if (k < 0 || k > m * n)
        throw std::invalid_argument("k must lie in [0, m*n]");
    if (snr_db.empty())
        throw std::invalid_argument("snr_db grid is empty");
    for (std::size_t i = 1; i < snr_db.size(); ++i)
        if (!(snr_db[i] > snr_db[i - 1]))
            throw std::invalid_argument("snr_db grid must be strictly increasing");
    check_stopping(stopping());
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("eps must lie in (0, 1)");
}

SimCurve run_bler(const SimConfig& cfg)
{
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const Constellation c = make_constellation(cfg.m);
    std::optional<CodeConstruction> fixed;
    if (cfg.method != ConstructionMethod::GaussianApproximation)
        fixed = build_construction(cfg.method, cfg.m, cfg.k, cfg.n, cfg.eps);

    SimCurve curve;
    curve.metric = "bler";
    curve.config = cfg;
    for (std::size_t i = 0; i < cfg.snr_db.size(); ++i) {
        const double snr = cfg.snr_db[i];
        const CodeConstruction cons = fixed ? *fixed : build_construction(cfg.method, cfg.m, cfg.k, cfg.n, cfg.eps, snr);
        const auto factory = [&]() -> FrameTrial {
            auto decoder = std::make_shared<MultistageDecoder>(cons, c, cfg.list_size);
            return [decoder, snr](Rng& rng) { return simulate_frame(*decoder, snr, rng); };
        };
        const auto est = estimate_bler(factory, cfg.stopping(), cfg.seed, i, cfg.workers);
        curve.points.push_back({snr, est.bler(), est.blocks, est.errors});
    }
    curve.wall_seconds = elapsed_since(t0);
    return curve;
}

RequiredSnr min_required_snr(ConstructionMethod method, int m, int total_bits, int block_length, int list_size,
                             double eps, const RequiredSnrOptions& opts)
{
    check_common(block_length, list_size, opts.workers);
    check_stopping(opts.stop);
    if (!(opts.target_bler > 0.0 && opts.target_bler < 1.0))
        throw std::invalid_argument("target BLER must lie in (0, 1)");
    if (!(opts.step_db > 0.0) || opts.max_probes < 2)
        throw std::invalid_argument("need a positive step and at least two probes");
    if (total_bits <= 0 || total_bits >= m * block_length)
        throw std::invalid_argument("min_required_snr needs 0 < K < m*N");

    const Constellation c = make_constellation(m);
    std::optional<CodeConstruction> fixed;
    if (method != ConstructionMethod::GaussianApproximation)
        fixed = build_construction(method, m, total_bits, block_length, eps);

    const auto probe = [&](double snr, const StoppingRule& stop) {
        const CodeConstruction cons =
            fixed ? *fixed : build_construction(method, m, total_bits, block_length, eps, snr);
        const auto factory = [&]() -> FrameTrial {
            auto decoder = std::make_shared<MultistageDecoder>(cons, c, list_size);
            return [decoder, snr](Rng& rng) { return simulate_frame(*decoder, snr, rng); };
        };
        // Keyed by the SNR itself so that every method shares the stream.
        const auto stream = static_cast<std::uint64_t>(std::llround(snr * 1000.0) + (1LL << 40));
        const auto est = estimate_bler(factory, stop, opts.seed, stream, opts.workers);
        return SimPoint{snr, est.bler(), est.blocks, est.errors};
    };

    const double capacity_snr = solve_snr_capacity(c, static_cast<double>(total_bits) / block_length);
    const double start = std::floor(capacity_snr / opts.step_db) * opts.step_db;

    const auto attempt = [&](const StoppingRule& stop, bool& monotone) {
        RequiredSnr out;
        SimPoint above{}, below{}; // BLER above / at-or-below the target
        double snr = start;
        SimPoint p = probe(snr, stop);
        out.probes.push_back(p);
        const bool walk_down = p.value <= opts.target_bler;
        for (;;) {
            if (static_cast<int>(out.probes.size()) >= opts.max_probes)
                throw std::runtime_error("min_required_snr: BLER target not crossed within " +
                                         std::to_string(opts.max_probes) + " probes");
            snr += walk_down ? -opts.step_db : opts.step_db;
            const SimPoint next = probe(snr, stop);
            out.probes.push_back(next);
            if (walk_down && next.value > opts.target_bler) {
                above = next;
                below = p;
                break;
            }
            if (!walk_down && next.value <= opts.target_bler) {
                above = p;
                below = next;
                break;
            }
            p = next;
        }
        std::ranges::sort(out.probes, {}, &SimPoint::snr_db);
        monotone = true;
        for (std::size_t i = 1; i < out.probes.size(); ++i) {
            const auto& a = out.probes[i - 1];
            const auto& b = out.probes[i];
            const auto var = [](const SimPoint& q) {
                const double pq = std::max(q.value, 0.5 / q.blocks);
                return pq * (1.0 - pq) / q.blocks;
            };
            if (b.value > a.value + 2.0 * std::sqrt(var(a) + var(b)))
                monotone = false;
        }
        const double la = log_bler(above);
        const double lb = log_bler(below);
        const double lt = std::log(opts.target_bler);
        const double frac = la > lb ? std::clamp((la - lt) / (la - lb), 0.0, 1.0) : 1.0;
        out.snr_db = above.snr_db + frac * (below.snr_db - above.snr_db);
        return out;
    };

    bool monotone = true;
    RequiredSnr result = attempt(opts.stop, monotone);
    if (!monotone) {
        const StoppingRule wider{2 * opts.stop.max_blocks, 2 * opts.stop.max_errors};
        result = attempt(wider, monotone);
        result.warning = !monotone;
    }
    return result;
}

RequiredSnr min_required_snr(ConstructionMethod method, const McsEntry& mcs, int block_length, int list_size,
                             double eps, const RequiredSnrOptions& opts)
{
    return min_required_snr(method, mcs.modulation_order, mcs.info_bits(block_length), block_length, list_size, eps,
                            opts);
}

double BlerLut::predict(double snr) const
{
    if (snr_db.empty() || snr < snr_db.front())
        return 1.0;
    if (snr >= snr_db.back())
        return bler.back();
    const auto it = std::ranges::upper_bound(snr_db, snr);
    const std::size_t hi = static_cast<std::size_t>(it - snr_db.begin());
    const std::size_t lo = hi - 1;
    const double t = (snr - snr_db[lo]) / (snr_db[hi] - snr_db[lo]);
    if (bler[lo] > 0.0 && bler[hi] > 0.0)
        return std::exp(std::log(bler[lo]) + t * (std::log(bler[hi]) - std::log(bler[lo])));
    return bler[lo] + t * (bler[hi] - bler[lo]);
}

BlerLut build_bler_lut(ConstructionMethod method, const McsEntry& mcs, int block_length, int list_size, double eps,
                       std::span<const double> grid, const StoppingRule& stop, std::uint64_t seed, int workers)
{
    SimConfig cfg;
    cfg.method = method;
    cfg.m = mcs.modulation_order;
    cfg.n = block_length;
    cfg.k = mcs.info_bits(block_length);
    cfg.list_size = list_size;
    cfg.snr_db.assign(grid.begin(), grid.end());
    cfg.max_blocks = stop.max_blocks;
    cfg.max_errors = stop.max_errors;
    cfg.seed = seed;
    cfg.eps = eps;
    cfg.workers = workers;
    const auto curve = run_bler(cfg);
    BlerLut lut;
    for (const auto& p : curve.points) {
        lut.snr_db.push_back(p.snr_db);
        lut.bler.push_back(p.value);
    }
    return lut;
}

std::size_t select_mcs(std::span<const McsEntry> table, std::span<const BlerLut> luts, double snr_db,
                       double bler_limit)
{
    if (table.empty() || table.size() != luts.size())
        throw std::invalid_argument("need one BLER table per MCS entry");
    std::size_t best = 0;
    double best_rate = -1.0;
    for (std::size_t i = 0; i < table.size(); ++i) {
        const double p = luts[i].predict(snr_db);
        if (p > bler_limit)
            continue;
        const double rate = table[i].sum_rate() * (1.0 - p);
        if (rate > best_rate) {
            best_rate = rate;
            best = i;
        }
    }
    return best;
}

SimCurve run_throughput(const SimConfig& cfg, std::span<const McsEntry> table, std::span<const BlerLut> luts,
                        double bler_limit)
{
    check_common(cfg.n, cfg.list_size, cfg.workers);
    if (cfg.snr_db.empty() || cfg.max_blocks < 1)
        throw std::invalid_argument("throughput needs mean SNRs and at least one block");
    if (table.empty() || table.size() != luts.size())
        throw std::invalid_argument("need one BLER table per MCS entry");
    const auto t0 = std::chrono::steady_clock::now();
    const bool online = cfg.method == ConstructionMethod::GaussianApproximation;

    std::vector<Constellation> constellations;
    std::vector<int> info_bits;
    std::vector<CodeConstruction> fixed;
    for (const auto& e : table) {
        constellations.push_back(make_constellation(e.modulation_order));
        info_bits.push_back(e.info_bits(cfg.n));
        if (!online)
            fixed.push_back(build_construction(cfg.method, e.modulation_order, info_bits.back(), cfg.n, cfg.eps));
    }

    SimCurve curve;
    curve.metric = "throughput";
    curve.config = cfg;
    for (std::size_t point = 0; point < cfg.snr_db.size(); ++point) {
        const double mean_snr = cfg.snr_db[point];
        const auto make_job = [&]() -> FrameJob {
            auto decoders = std::make_shared<std::vector<std::unique_ptr<MultistageDecoder>>>(table.size());
            return [&, decoders, mean_snr, point](long long frame) {
                Rng rng = frame_rng(cfg.seed, point, static_cast<std::uint64_t>(frame));
                const Complex h = rayleigh_coefficient(rng);
                const double gain = std::max(std::norm(h), 1e-30);
                const double inst_snr = mean_snr + 10.0 * std::log10(gain);
                const std::size_t sel = select_mcs(table, luts, inst_snr, bler_limit);
                bool error;
                if (online) {
                    const auto cons = construct_ga(constellations[sel], info_bits[sel], cfg.n,
                                                   std::clamp(inst_snr, -60.0, 100.0));
                    MultistageDecoder decoder(cons, constellations[sel], cfg.list_size);
                    error = simulate_faded_frame(decoder, mean_snr, h, rng);
                } else {
                    auto& decoder = (*decoders)[sel];
                    if (!decoder)
                        decoder = std::make_unique<MultistageDecoder>(fixed[sel], constellations[sel], cfg.list_size);
                    error = simulate_faded_frame(*decoder, mean_snr, h, rng);
                }
                return FrameOutcome{error, error ? 0.0 : static_cast<double>(info_bits[sel])};
            };
        };
        SimPoint p{mean_snr, 0.0, 0, 0};
        double delivered = 0.0;
        run_frames(make_job, cfg.workers, cfg.max_blocks, [&](const FrameOutcome& o) {
            ++p.blocks;
            p.errors += o.error ? 1 : 0;
            delivered += o.delivered;
            return true;
        });
        p.value = delivered / (static_cast<double>(p.blocks) * cfg.n);
        curve.points.push_back(p);
    }
    curve.wall_seconds = elapsed_since(t0);
    return curve;
}

} // namespace mlcpcm
