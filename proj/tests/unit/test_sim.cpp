#include <doctest.h>

#include <boost/crc.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "mlcpcm/config.hpp"
#include "mlcpcm/mcs.hpp"
#include "mlcpcm/sim.hpp"
#include "oracles.hpp"

using namespace mlcpcm;

namespace {

// Second transcription of the 64QAM MCS table (index, Q_m, R x 1024, SE).
struct McsRow {
    int qm;
    double rate;
    double se;
};
const McsRow kMcsReference[] = {
    {2, 120, 0.2344},   {2, 193, 0.3770},   {2, 308, 0.6016}, {2, 449, 0.8770}, {2, 602, 1.1758},
    {4, 378, 1.4766},   {4, 434, 1.6953},   {4, 490, 1.9141}, {4, 553, 2.1602}, {4, 616, 2.4063},
    {4, 658, 2.5703},   {6, 466, 2.7305},   {6, 517, 3.0293}, {6, 567, 3.3223}, {6, 616, 3.6094},
    {6, 666, 3.9023},   {6, 719, 4.2129},   {6, 772, 4.5234}, {6, 822, 4.8164}, {6, 873, 5.1152},
    {8, 682.5, 5.3320}, {8, 711, 5.5547},   {8, 754, 5.8906}, {8, 797, 6.2266}, {8, 841, 6.5703},
    {8, 885, 6.9141},   {8, 916.5, 7.1602}, {8, 948, 7.4063},
};

// Stand-alone CA-SCL for BPSK written from the recursive channel-splitting
// formulas: x = (enc(u_a) + enc(u_b), enc(u_b)), min-sum check node, path
// metric penalty |L| on disagreement with the hard decision.
namespace indep {

struct Estimate {
    int frames;
    int errors;
    double rate() const { return static_cast<double>(errors) / frames; }
};

std::vector<Bit> encode(const std::vector<Bit>& u)
{
    if (u.size() == 1)
        return u;
    const std::size_t h = u.size() / 2;
    const auto a = encode({u.begin(), u.begin() + h});
    const auto b = encode({u.begin() + h, u.end()});
    std::vector<Bit> x(u.size());
    for (std::size_t j = 0; j < h; ++j) {
        x[j] = a[j] ^ b[j];
        x[j + h] = b[j];
    }
    return x;
}

double bit_llr(std::vector<double> llr, const Bit* u, std::size_t i)
{
    while (llr.size() > 1) {
        const std::size_t h = llr.size() / 2;
        std::vector<double> next(h);
        if (i < h) {
            for (std::size_t j = 0; j < h; ++j)
                next[j] = (llr[j] < 0) != (llr[j + h] < 0) ? -std::min(std::abs(llr[j]), std::abs(llr[j + h]))
                                                           : std::min(std::abs(llr[j]), std::abs(llr[j + h]));
        } else {
            const auto a = encode(std::vector<Bit>(u, u + h));
            for (std::size_t j = 0; j < h; ++j)
                next[j] = llr[j + h] + (a[j] ? -llr[j] : llr[j]);
            u += h;
            i -= h;
        }
        llr = std::move(next);
    }
    return llr[0];
}

bool crc_ok(const std::vector<Bit>& u, const std::vector<int>& info)
{
    boost::crc_basic<16> crc(0x1021, 0, 0, false, false);
    for (int i : info)
        crc.process_bit(u[i] != 0);
    return crc.checksum() == 0;
}

std::vector<Bit> decode(const std::vector<double>& llr, const std::vector<int>& info, std::size_t list)
{
    const std::size_t n = llr.size();
    std::vector<char> is_info(n, 0);
    for (int i : info)
        is_info[i] = 1;
    struct Path {
        std::vector<Bit> u;
        double pm;
    };
    std::vector<Path> paths{{{}, 0.0}};
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Path> next;
        for (const auto& p : paths) {
            const double l = bit_llr(llr, p.u.data(), i);
            const Bit hard = l < 0 ? 1 : 0;
            for (Bit b = 0; b < 2; ++b) {
                if (!is_info[i] && b == 1)
                    continue;
                Path q = p;
                q.u.push_back(b);
                q.pm += b == hard ? 0.0 : std::abs(l);
                next.push_back(std::move(q));
            }
        }
        std::stable_sort(next.begin(), next.end(), [](const Path& a, const Path& b) { return a.pm < b.pm; });
        if (next.size() > list)
            next.resize(list);
        paths = std::move(next);
    }
    for (const auto& p : paths)
        if (crc_ok(p.u, info))
            return p.u;
    return paths.front().u;
}

// Block error rate of BPSK, N = 256, K = 128 including CRC-16, at Es/N0 = snr.
Estimate bler(double snr_db, int n, int k, std::size_t list, int frames, std::uint64_t seed)
{
    const auto info = five_g_sequence(n).most_reliable(k, n);
    const double n0 = std::pow(10.0, -snr_db / 10.0);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, std::sqrt(n0 / 2.0));
    std::bernoulli_distribution coin(0.5);
    int errors = 0;
    for (int f = 0; f < frames; ++f) {
        std::vector<Bit> u(n, 0);
        boost::crc_basic<16> crc(0x1021, 0, 0, false, false);
        for (int t = 0; t < k - 16; ++t) {
            u[info[t]] = coin(rng);
            crc.process_bit(u[info[t]] != 0);
        }
        const unsigned r = crc.checksum();
        for (int t = 0; t < 16; ++t)
            u[info[k - 16 + t]] = (r >> (15 - t)) & 1u;
        const auto x = encode(u);
        std::vector<double> llr(n);
        for (int i = 0; i < n; ++i)
            llr[i] = -4.0 * ((x[i] ? 1.0 : -1.0) + noise(rng)) / n0;
        errors += decode(llr, info, list) != u;
    }
    return {frames, errors};
}

} // namespace indep

double sample_sd_tolerance(double max_rate, long long blocks) { return 3.0 * max_rate * 0.5 / std::sqrt(blocks); }

} // namespace

TEST_CASE("AWGN: noiseless limit, variance and determinism")
{
    const auto c = build_qam(4);
    std::vector<Complex> x(1000);
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = c.points()[i % 16];
    Rng rng = frame_rng(1, 0, 0);
    CHECK(awgn_transmit(x, kNoiselessSnrDb, rng) == x);
    CHECK(awgn_transmit(x, 300.0, rng) == x);

    for (double snr : {-3.0, 0.0, 7.5, 20.0}) {
        const double n0 = std::pow(10.0, -snr / 10.0);
        Rng r = frame_rng(2, 1, 0);
        const auto n = complex_noise(1000000, n0, r);
        double re2 = 0.0, im2 = 0.0, cross = 0.0;
        for (const auto& v : n) {
            re2 += v.real() * v.real();
            im2 += v.imag() * v.imag();
            cross += v.real() * v.imag();
        }
        const double k = static_cast<double>(n.size());
        CHECK(std::abs((re2 + im2) / k / n0 - 1.0) < 0.01);
        CHECK(std::abs(re2 / k / (n0 / 2) - 1.0) < 0.01);
        CHECK(std::abs(im2 / k / (n0 / 2) - 1.0) < 0.01);
        CHECK(std::abs(cross / k) < 0.01 * n0);
    }

    Rng a = frame_rng(5, 3, 17), b = frame_rng(5, 3, 17), d = frame_rng(5, 3, 18);
    const auto ya = awgn_transmit(x, 3.0, a);
    CHECK(ya == awgn_transmit(x, 3.0, b));
    CHECK(ya != awgn_transmit(x, 3.0, d));
    Rng e = frame_rng(6, 3, 17);
    CHECK(ya != awgn_transmit(x, 3.0, e));
}

TEST_CASE("random bits are balanced and reproducible")
{
    Rng a = frame_rng(1, 2, 3), b = frame_rng(1, 2, 3);
    const auto bits = random_bits(100001, a);
    CHECK(bits == random_bits(100001, b));
    const long ones = std::count(bits.begin(), bits.end(), Bit{1});
    CHECK(std::abs(ones - 50000.5) < 4.0 * std::sqrt(100001 * 0.25));
    CHECK(std::all_of(bits.begin(), bits.end(), [](Bit v) { return v <= 1; }));
}

TEST_CASE("BLER estimator is unbiased on a Bernoulli channel")
{
    for (double p : {0.5, 0.05, 0.003}) {
        const TrialFactory factory = [p]() -> FrameTrial {
            return [p](Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; };
        };
        const auto est = estimate_bler(factory, {20000, 1000000}, 11, 0, 1);
        CHECK(est.blocks == 20000);
        CHECK(std::abs(est.bler() - p) <= oracle::binomial_halfwidth(p, 20000, 3.29));

        // error-limited run: blocks until the 100th error, mean 100/p
        const auto lim = estimate_bler(factory, {100000000, 100}, 12, 0, 1);
        CHECK(lim.errors == 100);
        CHECK(std::abs(lim.blocks * p / 100.0 - 1.0) < 0.4);

        for (int w : {2, 3, 4}) {
            const auto a = estimate_bler(factory, {20000, 1000000}, 11, 0, w);
            CHECK(a.blocks == est.blocks);
            CHECK(a.errors == est.errors);
            const auto b = estimate_bler(factory, {100000000, 100}, 12, 0, w);
            CHECK(b.blocks == lim.blocks);
        }
    }
}

TEST_CASE("estimate_bler propagates trial exceptions")
{
    const TrialFactory factory = []() -> FrameTrial {
        return [](Rng&) -> bool { throw std::runtime_error("trial failed"); };
    };
    CHECK_THROWS_AS(estimate_bler(factory, {100, 10}, 1, 0, 1), std::runtime_error);
    CHECK_THROWS_AS(estimate_bler(factory, {100, 10}, 1, 0, 3), std::runtime_error);
}

TEST_CASE("noiseless run_bler is error free")
{
    for (auto method : {ConstructionMethod::RateFillCapacity, ConstructionMethod::RateFillFiniteLength,
                        ConstructionMethod::GaussianApproximation}) {
        SimConfig cfg;
        cfg.method = method;
        cfg.m = 4;
        cfg.n = 64;
        cfg.k = 128;
        cfg.list_size = 4;
        cfg.snr_db = {kNoiselessSnrDb};
        cfg.max_blocks = 100;
        const auto curve = run_bler(cfg);
        REQUIRE(curve.points.size() == 1);
        CHECK(curve.points[0].blocks == 100);
        CHECK(curve.points[0].errors == 0);
        CHECK(curve.points[0].value == 0.0);
        CHECK(curve.metric == "bler");
    }
}

TEST_CASE("run_bler is reproducible and independent of the worker count")
{
    SimConfig cfg;
    cfg.m = 4;
    cfg.n = 64;
    cfg.k = 128;
    cfg.list_size = 4;
    cfg.snr_db = {4.0, 5.0, 6.0};
    cfg.max_blocks = 600;
    cfg.max_errors = 40;
    cfg.seed = 99;
    const auto a = run_bler(cfg);
    const auto b = run_bler(cfg);
    cfg.workers = 3;
    const auto c = run_bler(cfg);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(a.points[i].blocks == b.points[i].blocks);
        CHECK(a.points[i].errors == b.points[i].errors);
        CHECK(a.points[i].blocks == c.points[i].blocks);
        CHECK(a.points[i].errors == c.points[i].errors);
        CHECK(a.points[i].value >= 0.0);
        CHECK(a.points[i].value <= 1.0);
        CHECK(a.points[i].errors <= a.points[i].blocks);
    }
    CHECK(a.points[0].errors > 0);
    cfg.seed = 100;
    const auto d = run_bler(cfg);
    bool differs = false;
    for (std::size_t i = 0; i < 3; ++i)
        differs = differs || d.points[i].blocks != a.points[i].blocks || d.points[i].errors != a.points[i].errors;
    CHECK(differs);
}

TEST_CASE("one-level BLER agrees with an independent CA-SCL implementation")
{
    // BLER near 0.1, enough errors for the comparison to have power
    const double snr = -2.0;
    const int frames = 1000;
    SimConfig cfg;
    cfg.method = ConstructionMethod::RateFillCapacity;
    cfg.m = 1;
    cfg.n = 256;
    cfg.k = 128;
    cfg.list_size = 8;
    cfg.snr_db = {snr};
    cfg.max_blocks = frames;
    cfg.max_errors = frames + 1;
    cfg.seed = 2024;
    const auto ours = run_bler(cfg).points[0];
    const auto ref = indep::bler(snr, 256, 128, 8, frames, 77);
    const double p1 = ours.value, p2 = ref.rate();
    const double pooled = (ours.errors + ref.errors) / (2.0 * frames);
    const double halfwidth = 1.96 * std::sqrt(pooled * (1.0 - pooled) * 2.0 / frames);
    MESSAGE("library BLER " << p1 << ", independent " << p2 << ", 95% half-width " << halfwidth);
    CHECK(ref.errors > 20);
    CHECK(std::abs(p1 - p2) <= halfwidth);
}

TEST_CASE("independent decoder accepts library codewords")
{
    const auto code = ComponentCode(64, five_g_sequence(64).most_reliable(40, 64), 16);
    Rng rng = frame_rng(3, 0, 0);
    for (int t = 0; t < 20; ++t) {
        const auto u = place_payload(code, random_bits(24, rng));
        CHECK(indep::crc_ok(u, code.info_set));
        CHECK(indep::encode(u) == polar_encode(u));
    }
}

TEST_CASE("simulation config validation")
{
    SimConfig ok;
    CHECK_NOTHROW(ok.validate());
    const auto rejects = [](auto mutate) {
        SimConfig c;
        mutate(c);
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    };
    rejects([](SimConfig& c) { c.m = 3; });
    rejects([](SimConfig& c) { c.m = 10; });
    rejects([](SimConfig& c) { c.n = 100; });
    rejects([](SimConfig& c) { c.k = 4 * 256 + 1; });
    rejects([](SimConfig& c) { c.k = -1; });
    rejects([](SimConfig& c) { c.list_size = 3; });
    rejects([](SimConfig& c) { c.snr_db = {}; });
    rejects([](SimConfig& c) { c.snr_db = {1.0, 1.0}; });
    rejects([](SimConfig& c) { c.snr_db = {2.0, 1.0}; });
    rejects([](SimConfig& c) { c.max_blocks = 0; });
    rejects([](SimConfig& c) { c.max_errors = 0; });
    rejects([](SimConfig& c) { c.eps = 0.0; });
    rejects([](SimConfig& c) { c.eps = 1.0; });
    rejects([](SimConfig& c) { c.workers = 0; });
    SimConfig bad;
    bad.snr_db = {3.0, 2.0};
    CHECK_THROWS_AS(run_bler(bad), std::invalid_argument);
}

TEST_CASE("required SNR ordering")
{
    RequiredSnrOptions opts;
    opts.stop = {3000, 50};
    const auto tiny = min_required_snr(ConstructionMethod::RateFillCapacity, 2, 1, 1024, 4, 0.1, opts);
    const auto high = min_required_snr(ConstructionMethod::RateFillCapacity, 2, 115, 64, 4, 0.1, opts);
    MESSAGE("K=1 at N=1024: " << tiny.snr_db << " dB, R=0.9: " << high.snr_db << " dB");
    CHECK(tiny.snr_db < high.snr_db - 20.0);

    RequiredSnrOptions strict = opts;
    strict.target_bler = 0.01;
    for (auto method : {ConstructionMethod::RateFillFiniteLength, ConstructionMethod::GaussianApproximation}) {
        const auto loose = min_required_snr(method, 2, 64, 64, 4, 0.1, opts);
        const auto tight = min_required_snr(method, 2, 64, 64, 4, 0.1, strict);
        MESSAGE(to_string(method) << ": 1e-1 at " << loose.snr_db << " dB, 1e-2 at " << tight.snr_db << " dB");
        CHECK(tight.snr_db >= loose.snr_db);
        CHECK_FALSE(loose.probes.empty());
        // the required SNR lies between the bracketing probes
        double below = -1e9, above = 1e9;
        for (const auto& p : loose.probes) {
            if (p.value > 0.1)
                below = std::max(below, p.snr_db);
            else
                above = std::min(above, p.snr_db);
        }
        CHECK(loose.snr_db >= below);
        CHECK(loose.snr_db <= above);
    }
    RequiredSnrOptions bad = opts;
    bad.target_bler = 1.5;
    CHECK_THROWS_AS(min_required_snr(ConstructionMethod::RateFillCapacity, 2, 64, 64, 4, 0.1, bad),
                    std::invalid_argument);
    CHECK_THROWS_AS(min_required_snr(ConstructionMethod::RateFillCapacity, 2, 128, 64, 4, 0.1, opts),
                    std::invalid_argument);
}

TEST_CASE("rate-filling II tracks GA in required SNR at BLER 1e-1 on sampled MCS entries")
{
    const auto& table = default_mcs_table();
    RequiredSnrOptions opts;
    opts.target_bler = 0.1;
    opts.stop = {100000, 100};
    for (int idx : {4, 9, 14}) {
        const auto rf2 = min_required_snr(ConstructionMethod::RateFillFiniteLength, table[idx], 256, 8, 0.1, opts);
        const auto ga = min_required_snr(ConstructionMethod::GaussianApproximation, table[idx], 256, 8, 0.1, opts);
        MESSAGE("MCS " << idx << ": RF-II " << rf2.snr_db << " dB, GA " << ga.snr_db << " dB");
        CHECK(std::abs(rf2.snr_db - ga.snr_db) <= 0.25);
    }
}

TEST_CASE("BLER table interpolation")
{
    const BlerLut lut{{0.0, 1.0, 2.0, 3.0}, {0.5, 0.05, 0.005, 0.0}};
    CHECK(lut.predict(-0.1) == 1.0);
    CHECK(lut.predict(0.0) == doctest::Approx(0.5));
    CHECK(lut.predict(0.5) == doctest::Approx(std::sqrt(0.5 * 0.05)));
    CHECK(lut.predict(1.0) == doctest::Approx(0.05));
    CHECK(lut.predict(1.25) == doctest::Approx(0.05 * std::pow(0.1, 0.25)));
    CHECK(lut.predict(2.5) == doctest::Approx(0.0025));
    CHECK(lut.predict(3.0) == 0.0);
    CHECK(lut.predict(50.0) == 0.0);
    CHECK(BlerLut{}.predict(10.0) == 1.0);
    double prev = 2.0;
    for (double s = -1.0; s < 4.0; s += 0.01) {
        const double p = lut.predict(s);
        CHECK(p <= prev);
        prev = p;
    }
}

TEST_CASE("MCS selection")
{
    const std::vector<McsEntry> table{{0, 2, 120, 0.2344}, {1, 4, 378, 1.4766}, {2, 6, 466, 2.7305}};
    const std::vector<BlerLut> luts{
        {{0.0, 10.0}, {0.05, 0.0}},
        {{5.0, 15.0}, {0.2, 0.0}},
        {{10.0, 20.0}, {0.5, 0.001}},
    };
    CHECK(select_mcs(table, luts, -5.0) == 0);  // nothing feasible: lowest entry
    CHECK(select_mcs(table, luts, 2.0) == 0);
    CHECK(select_mcs(table, luts, 5.0) == 0);   // entry 1 predicts 0.2
    CHECK(select_mcs(table, luts, 12.0) == 1);  // entry 2 still above the limit
    CHECK(select_mcs(table, luts, 25.0) == 2);
    CHECK(select_mcs(table, luts, 5.0, 0.25) == 1);
    // a lower entry wins when its goodput m R (1 - p) is larger
    const std::vector<BlerLut> close{{{0.0}, {0.0}}, {{0.0}, {0.1}}, {{0.0}, {0.09}}};
    const std::vector<McsEntry> near{{0, 4, 500, 0}, {1, 4, 520, 0}, {2, 4, 510, 0}};
    CHECK(select_mcs(near, close, 1.0) == 0);
    CHECK_THROWS_AS(select_mcs(table, std::vector<BlerLut>(2), 0.0), std::invalid_argument);
}

TEST_CASE("AMC throughput over block Rayleigh fading")
{
    const auto& full = default_mcs_table();
    const std::vector<McsEntry> table{full[0], full[4], full[9]};
    const int n = 64;
    const auto grid = snr_grid(-6.0, 16.0, 1.0);
    std::vector<BlerLut> luts;
    for (const auto& e : table)
        luts.push_back(build_bler_lut(ConstructionMethod::RateFillFiniteLength, e, n, 4, 0.1, grid, {400, 40}, 5, 1));
    for (const auto& lut : luts) {
        CHECK(lut.snr_db.size() == grid.size());
        CHECK(lut.bler.front() > lut.bler.back());
    }

    SimConfig cfg;
    cfg.method = ConstructionMethod::RateFillFiniteLength;
    cfg.n = n;
    cfg.list_size = 4;
    cfg.snr_db = {-30.0, 0.0, 5.0, 10.0, 15.0, 20.0, 60.0};
    cfg.max_blocks = 400;
    cfg.seed = 8;
    const auto curve = run_throughput(cfg, table, luts);
    CHECK(curve.metric == "throughput");
    const double max_rate = table.back().info_bits(n) / static_cast<double>(n);
    for (const auto& p : curve.points) {
        MESSAGE("mean SNR " << p.snr_db << " dB: " << p.value << " bits/symbol");
        CHECK(p.blocks == 400);
        CHECK(p.value >= 0.0);
        CHECK(p.value <= max_rate + 1e-12);
    }
    CHECK(curve.points.front().value == 0.0);
    CHECK(curve.points.back().value >= 0.98 * max_rate);
    for (std::size_t i = 1; i < curve.points.size(); ++i)
        CHECK(curve.points[i].value >= curve.points[i - 1].value - sample_sd_tolerance(max_rate, 400));

    cfg.workers = 3;
    const auto again = run_throughput(cfg, table, luts);
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        CHECK(again.points[i].value == curve.points[i].value);
        CHECK(again.points[i].errors == curve.points[i].errors);
    }

    cfg.method = ConstructionMethod::GaussianApproximation;
    cfg.snr_db = {60.0};
    cfg.max_blocks = 50;
    CHECK(run_throughput(cfg, table, luts).points[0].value >= 0.98 * max_rate);
}

TEST_CASE("MCS table matches a second transcription")
{
    const auto file = load_mcs_table(std::string(MLCPCM_DATA_DIR) + "/mcs_table_38214_t2.csv");
    REQUIRE(file.size() == std::size(kMcsReference));
    for (std::size_t i = 0; i < file.size(); ++i) {
        INFO("MCS " << i);
        CHECK(file[i].index == static_cast<int>(i));
        CHECK(file[i].modulation_order == kMcsReference[i].qm);
        CHECK(file[i].rate_x1024 == kMcsReference[i].rate);
        CHECK(file[i].spectral_efficiency == kMcsReference[i].se);
        CHECK(std::abs(kMcsReference[i].qm * kMcsReference[i].rate / 1024.0 - kMcsReference[i].se) < 5.01e-5);
    }
    const auto& builtin = default_mcs_table();
    REQUIRE(builtin.size() == file.size());
    for (std::size_t i = 0; i < file.size(); ++i) {
        CHECK(builtin[i].modulation_order == file[i].modulation_order);
        CHECK(builtin[i].rate_x1024 == file[i].rate_x1024);
    }
    CHECK(builtin[20].info_bits(256) == static_cast<int>(std::lround(8 * 256 * 682.5 / 1024.0)));
    CHECK(builtin[0].info_bits(256) == 60);
}

TEST_CASE("MCS loader rejects malformed tables")
{
    const std::string header = "index,Q_m,rate_x1024,spectral_efficiency\n";
    CHECK(parse_mcs_table(header + "0,2,120,0.2344\n1,4,378,1.4766\n").size() == 2);
    CHECK_THROWS_AS(parse_mcs_table("idx,Q,r,se\n0,2,120,0.2344\n"), std::runtime_error);
    CHECK_THROWS_AS(parse_mcs_table(header + "1,2,120,0.2344\n"), std::runtime_error);
    CHECK_THROWS_AS(parse_mcs_table(header + "0,3,120,0.3516\n"), std::runtime_error);
    CHECK_THROWS_AS(parse_mcs_table(header + "0,10,120,1.1719\n"), std::runtime_error);
    CHECK_THROWS_AS(parse_mcs_table(header + "0,2,0,0\n"), std::runtime_error);
    CHECK_THROWS_AS(parse_mcs_table(header + "0,2,1024,2\n"), std::runtime_error);
    CHECK_THROWS_AS(parse_mcs_table(header + "0,2,120,0.3000\n"), std::runtime_error);
    CHECK_THROWS_AS(parse_mcs_table(header + "0,2,abc,0.2344\n"), std::runtime_error);
    CHECK_THROWS_AS(parse_mcs_table(header), std::runtime_error);
    CHECK_THROWS_AS(load_mcs_table("/nonexistent/mcs.csv"), std::runtime_error);
}
