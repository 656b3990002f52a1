#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "isac/channel.hpp"
#include "isac/radar.hpp"

using namespace isac;

namespace {

struct Burst {
    IQBuffer tx;
    std::vector<QamSymbolVector> freq;
};

Burst make_burst(const OfdmConfig& cfg, int m_symbols, std::uint64_t seed) {
    RngStream rng(seed, 0);
    Burst b;
    b.tx.sample_rate_hz = cfg.sample_rate_hz();
    for (int m = 0; m < m_symbols; ++m) {
        std::vector<std::uint8_t> bits(static_cast<std::size_t>(cfg.n_subcarriers) * 4);
        for (auto& bit : bits) bit = static_cast<std::uint8_t>(rng.next_u64() & 1);
        QamSymbolVector s = qam_map(bits, cfg.modulation_order);
        auto sym = ofdm_modulate(s, cfg);
        b.freq.push_back(std::move(s));
        b.tx.samples.insert(b.tx.samples.end(), sym.time_samples.samples.begin(),
                            sym.time_samples.samples.end());
    }
    return b;
}

} // namespace

TEST_CASE("grid dimensions and constant phase at eps = 0") {
    OfdmConfig cfg;
    auto burst = make_burst(cfg, cfg.burst_symbols, 101);
    auto grid = build_symbol_grid(burst.tx, burst.freq, cfg);
    CHECK(grid.n_symbols == 64);
    CHECK(grid.n_subcarriers == 128);
    CHECK(grid.bin_resolution == doctest::Approx(128.0 / (64.0 * 144.0)).epsilon(1e-12));
    for (int m = 0; m < grid.n_symbols; ++m)
        for (int k = 0; k < grid.n_subcarriers; ++k)
            CHECK(std::abs(grid.at(m, k) - cplx{1.0, 0.0}) < 1e-9);
}

TEST_CASE("one-bin Doppler rotates the grid by e^{j2pi m/M} across slow time") {
    OfdmConfig cfg;
    auto burst = make_burst(cfg, cfg.burst_symbols, 102);
    const double eps = cfg.doppler_bin(); // exactly one bin
    auto rx = apply_cfo(burst.tx, eps, cfg.n_subcarriers);
    auto grid = build_symbol_grid(rx, burst.freq, cfg);
    for (int m = 1; m < grid.n_symbols; ++m) {
        const cplx ratio = grid.at(m, 0) / grid.at(0, 0);
        const double expect = 2.0 * M_PI * m / grid.n_symbols;
        const double diff = std::remainder(std::arg(ratio) - expect, 2.0 * M_PI);
        CHECK(std::abs(diff) < 0.05);
        CHECK(std::abs(ratio) == doctest::Approx(1.0).epsilon(0.05));
    }
}

TEST_CASE("decision-directed grid equals the known-data grid at eps = 0") {
    OfdmConfig cfg;
    cfg.burst_symbols = 8;
    auto burst = make_burst(cfg, 8, 103);
    auto a = build_symbol_grid(burst.tx, burst.freq, cfg, GridMode::KnownData);
    auto b = build_symbol_grid(burst.tx, burst.freq, cfg, GridMode::DecisionDirected);
    for (int m = 0; m < 8; ++m)
        for (int k = 0; k < cfg.n_subcarriers; ++k)
            CHECK(std::abs(a.at(m, k) - b.at(m, k)) < 1e-9);
}

TEST_CASE("doppler profile peaks at bin 0 for eps = 0") {
    OfdmConfig cfg;
    auto burst = make_burst(cfg, cfg.burst_symbols, 104);
    auto profile = doppler_profile(build_symbol_grid(burst.tx, burst.freq, cfg));
    int best = 0;
    for (int l = 1; l < 64; ++l)
        if (profile.magnitudes[l] > profile.magnitudes[best]) best = l;
    CHECK(best == 0);
}

TEST_CASE("single-bin Doppler: one dominant bin, everything else 13 dB down") {
    OfdmConfig cfg;
    auto burst = make_burst(cfg, cfg.burst_symbols, 105);
    auto rx = apply_cfo(burst.tx, 3.0 * cfg.doppler_bin(), cfg.n_subcarriers);
    auto profile = doppler_profile(build_symbol_grid(rx, burst.freq, cfg));
    const double peak = profile.magnitudes[3];
    for (int l = 0; l < 64; ++l) {
        if (l == 3) continue;
        CHECK(profile.magnitudes[l] <= peak * std::pow(10.0, -13.0 / 20.0));
    }
}

TEST_CASE("slow-time transform conserves energy per subcarrier (Parseval)") {
    // single-subcarrier grid, checked against the transform scaling
    SymbolGrid grid;
    grid.n_symbols = 8;
    grid.n_subcarriers = 1;
    grid.bin_resolution = 1.0;
    RngStream rng(106, 0);
    double grid_energy = 0.0;
    for (int m = 0; m < 8; ++m) {
        grid.entries.push_back(rng.complex_gaussian(1.0));
        grid_energy += std::norm(grid.entries.back());
    }
    auto profile = doppler_profile(grid);
    double spec_energy = 0.0;
    for (double v : profile.magnitudes) spec_energy += v * v;
    CHECK(spec_energy == doctest::Approx(8.0 * grid_energy).epsilon(1e-9));
}

TEST_CASE("coarse_estimate bin mapping") {
    DopplerProfile p;
    p.bin_resolution = 128.0 / (64.0 * 144.0);
    p.magnitudes.assign(64, 1.0);

    SUBCASE("peak at bin 0") {
        p.magnitudes[0] = 5.0;
        CHECK(coarse_estimate(p) == 0.0);
    }
    SUBCASE("peak at bin 3 gives 1/24") {
        p.magnitudes[3] = 5.0;
        CHECK(coarse_estimate(p) == doctest::Approx(1.0 / 24.0).epsilon(1e-12));
    }
    SUBCASE("peak at bin M-1 wraps to minus one bin") {
        p.magnitudes[63] = 5.0;
        CHECK(coarse_estimate(p) == doctest::Approx(-128.0 / (64.0 * 144.0)).epsilon(1e-12));
    }
    SUBCASE("flat profile ties break to the smallest |bin|") {
        CHECK(coarse_estimate(p) == 0.0);
    }
    SUBCASE("equal peaks prefer smallest |signed bin|, positive side") {
        p.magnitudes[5] = 5.0;
        p.magnitudes[62] = 5.0; // signed -2
        CHECK(coarse_estimate(p) == doctest::Approx(-2.0 * p.bin_resolution).epsilon(1e-12));
        p.magnitudes[2] = 5.0; // signed +2 ties with -2, positive wins
        CHECK(coarse_estimate(p) == doctest::Approx(2.0 * p.bin_resolution).epsilon(1e-12));
    }
}

TEST_CASE("noiseless quantization bound: error at most half a bin over +-3 bins") {
    OfdmConfig cfg;
    auto burst = make_burst(cfg, cfg.burst_symbols, 107);
    const double bin = cfg.doppler_bin();
    for (int i = -12; i <= 12; ++i) {
        const double eps = i * bin / 4.0; // quarter-bin steps over +-3 bins
        auto rx = apply_cfo(burst.tx, eps, cfg.n_subcarriers);
        auto est = coarse_estimate(doppler_profile(build_symbol_grid(rx, burst.freq, cfg)));
        CHECK(std::abs(est - eps) <= bin / 2.0 + 1e-12);
    }
}

TEST_CASE("argmax is invariant to complex scaling of the received frame") {
    OfdmConfig cfg;
    cfg.burst_symbols = 16;
    auto burst = make_burst(cfg, 16, 108);
    auto rx = apply_cfo(burst.tx, 0.1, cfg.n_subcarriers);
    auto base = coarse_estimate(doppler_profile(build_symbol_grid(rx, burst.freq, cfg)));

    IQBuffer scaled = rx;
    const cplx c{-2.3, 1.7};
    for (auto& s : scaled.samples) s *= c;
    auto est = coarse_estimate(doppler_profile(build_symbol_grid(scaled, burst.freq, cfg)));
    CHECK(est == base);
}

TEST_CASE("coarse residual always lies inside the fine unambiguous range") {
    OfdmConfig cfg;
    cfg.burst_symbols = 16;
    auto burst = make_burst(cfg, 16, 109);
    const double fine_half_range = cfg.preamble.ratio(cfg.n_subcarriers) / 2.0;
    const double coarse_range = cfg.n_subcarriers / (2.0 * cfg.symbol_len());
    for (int i = -20; i <= 20; ++i) {
        const double eps = i * coarse_range / 20.0 * 0.999;
        auto rx = apply_cfo(burst.tx, eps, cfg.n_subcarriers);
        auto est = coarse_estimate(doppler_profile(build_symbol_grid(rx, burst.freq, cfg)));
        CHECK(std::abs(eps - est) < fine_half_range);
    }
}

TEST_CASE("velocity_from_dfs") {
    OfdmConfig cfg; // 15 kHz, 28 GHz
    CHECK(velocity_from_dfs(0.0, cfg) == 0.0);
    CHECK(velocity_from_dfs(0.1, cfg) == doctest::Approx(16.06).epsilon(1e-3));
    CHECK(velocity_from_dfs(0.2, cfg) == doctest::Approx(2.0 * velocity_from_dfs(0.1, cfg)));
}

TEST_CASE("grid construction rejects malformed input") {
    OfdmConfig cfg;
    auto burst = make_burst(cfg, 4, 110);
    std::vector<QamSymbolVector> too_many(8, burst.freq[0]);
    CHECK_THROWS_AS(build_symbol_grid(burst.tx, too_many, cfg), std::invalid_argument);

    auto bad = burst.freq;
    bad[0].symbols[5] = cplx{0.0, 0.0};
    CHECK_THROWS_AS(build_symbol_grid(burst.tx, bad, cfg), std::invalid_argument);
}
