#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "isac/baselines.hpp"
#include "isac/channel.hpp"

using namespace isac;

namespace {

IQBuffer moose_body_with_cfo(const OfdmConfig& cfg, double eps, std::uint64_t seed) {
    RngStream rng(seed, 0);
    auto sym = make_moose_preamble(cfg, rng);
    auto rx = apply_cfo(sym.time_samples, eps, cfg.n_subcarriers);
    IQBuffer body;
    body.samples.assign(rx.samples.begin() + cfg.cp_len, rx.samples.end());
    return body;
}

IQBuffer data_symbols_with_cfo(const OfdmConfig& cfg, int count, double eps, std::uint64_t seed) {
    RngStream rng(seed, 1);
    IQBuffer tx;
    for (int m = 0; m < count; ++m) {
        std::vector<std::uint8_t> bits(static_cast<std::size_t>(cfg.n_subcarriers) * 4);
        for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_u64() & 1);
        auto sym = ofdm_modulate(qam_map(bits, 16), cfg);
        tx.samples.insert(tx.samples.end(), sym.time_samples.samples.begin(),
                          sym.time_samples.samples.end());
    }
    return apply_cfo(tx, eps, cfg.n_subcarriers);
}

} // namespace

TEST_CASE("moose preamble body has two identical halves") {
    OfdmConfig cfg;
    auto body = moose_body_with_cfo(cfg, 0.0, 301);
    for (int i = 0; i < 64; ++i) CHECK(std::abs(body[i] - body[i + 64]) < 1e-12);
}

TEST_CASE("moose: zero offset estimates zero, 0.25 exact, 1.2 wraps to -0.8") {
    OfdmConfig cfg;
    CHECK(std::abs(moose_estimate(moose_body_with_cfo(cfg, 0.0, 302), 128)) < 1e-10);
    CHECK(moose_estimate(moose_body_with_cfo(cfg, 0.25, 302), 128) ==
          doctest::Approx(0.25).epsilon(1e-10));
    CHECK(moose_estimate(moose_body_with_cfo(cfg, 1.2, 302), 128) ==
          doctest::Approx(-0.8).epsilon(1e-9));
}

TEST_CASE("moose rejects zero energy and short buffers") {
    IQBuffer zero;
    zero.samples.assign(128, cplx{0.0, 0.0});
    CHECK_THROWS_AS(moose_estimate(zero, 128), std::invalid_argument);
    zero.samples.resize(100);
    CHECK_THROWS_AS(moose_estimate(zero, 128), std::invalid_argument);
}

TEST_CASE("cpbe: zero offset, exact recovery at 0.1, wrap beyond 0.5") {
    OfdmConfig cfg;
    CHECK(std::abs(cpbe_estimate(data_symbols_with_cfo(cfg, 4, 0.0, 303), cfg)) < 1e-10);
    CHECK(cpbe_estimate(data_symbols_with_cfo(cfg, 4, 0.1, 303), cfg) ==
          doctest::Approx(0.1).epsilon(1e-10));
    // 0.7 exceeds the +-0.5 range and aliases to -0.3
    CHECK(cpbe_estimate(data_symbols_with_cfo(cfg, 4, 0.7, 303), cfg) ==
          doctest::Approx(-0.3).epsilon(1e-9));
}

TEST_CASE("cpbe: multipath with delay spread contaminates the CP correlation") {
    OfdmConfig cfg;
    auto tx = data_symbols_with_cfo(cfg, 8, 0.0, 304); // eps applied after channel below
    ChannelConfig ch;
    ch.paths = {PathSpec{{1.0, 0.0}, 0, 0.0, 0.0, true},
                PathSpec{{0.0, 0.5}, 5, 0.0, 0.0, false}};
    ch.doppler_normalized = 0.1;
    ch.n_subcarriers = 128;
    RngStream rng(1, 1);
    auto rx = apply_channel(tx, ch, rng, 0.0).at(0, 0);
    const double est = cpbe_estimate(rx, cfg);
    CHECK(std::abs(est - 0.1) > 1e-4); // ISI bias, absent in the clean case
}

TEST_CASE("psa: zero offset, exact recovery at 0.2, wrap at 0.5") {
    OfdmConfig cfg;
    PilotSpec pilots = default_pilots(cfg);
    REQUIRE(pilots.subcarriers.size() == 16);

    auto run = [&](double eps) {
        RngStream rng(305, 2);
        std::vector<bool> is_pilot(cfg.n_subcarriers, false);
        for (int k : pilots.subcarriers) is_pilot[k] = true;
        IQBuffer tx;
        for (int m = 0; m < 2; ++m) {
            std::vector<std::uint8_t> bits((cfg.n_subcarriers - 16) * 4);
            for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_u64() & 1);
            auto data = qam_map(bits, 16);
            QamSymbolVector freq;
            freq.symbols.resize(cfg.n_subcarriers);
            std::size_t di = 0, pi = 0;
            for (int k = 0; k < cfg.n_subcarriers; ++k)
                freq.symbols[k] = is_pilot[k] ? pilots.values[pi++] : data.symbols[di++];
            auto sym = ofdm_modulate(freq, cfg);
            tx.samples.insert(tx.samples.end(), sym.time_samples.samples.begin(),
                              sym.time_samples.samples.end());
        }
        auto rx = apply_cfo(tx, eps, cfg.n_subcarriers);
        OfdmSymbol s1, s2;
        s1.time_samples.samples.assign(rx.samples.begin(), rx.samples.begin() + 144);
        s2.time_samples.samples.assign(rx.samples.begin() + 144, rx.samples.begin() + 288);
        return psa_estimate(ofdm_demodulate(s1, cfg), ofdm_demodulate(s2, cfg), pilots, cfg);
    };

    CHECK(std::abs(run(0.0)) < 1e-10);
    CHECK(run(0.2) == doctest::Approx(0.2).epsilon(1e-9));
    // range is 128/288 = 0.4444...; 0.5 aliases to 0.5 - 8/9
    CHECK(run(0.5) == doctest::Approx(0.5 - 8.0 / 9.0).epsilon(1e-6));
}

TEST_CASE("psa rejects an empty pilot set") {
    OfdmConfig cfg;
    QamSymbolVector y;
    y.symbols.assign(cfg.n_subcarriers, cplx{1.0, 0.0});
    PilotSpec empty;
    CHECK_THROWS_AS(psa_estimate(y, y, empty, cfg), std::invalid_argument);
}

TEST_CASE("estimates are invariant to complex scaling of the input") {
    OfdmConfig cfg;
    const cplx c{0.3, -1.9};

    auto mb = moose_body_with_cfo(cfg, 0.31, 306);
    auto mb_scaled = mb;
    for (auto& s : mb_scaled.samples) s *= c;
    CHECK(moose_estimate(mb, 128) == doctest::Approx(moose_estimate(mb_scaled, 128)).epsilon(1e-12));

    auto cb = data_symbols_with_cfo(cfg, 3, 0.17, 306);
    auto cb_scaled = cb;
    for (auto& s : cb_scaled.samples) s *= c;
    CHECK(cpbe_estimate(cb, cfg) == doctest::Approx(cpbe_estimate(cb_scaled, cfg)).epsilon(1e-12));
}

TEST_CASE("ranked unambiguous ranges: PSA < CPBE < Moose < fine") {
    OfdmConfig cfg;
    CHECK(psa_range(cfg) == doctest::Approx(128.0 / 288.0).epsilon(1e-12));
    CHECK(cpbe_range() == 0.5);
    CHECK(moose_range() == 1.0);
    CHECK(fine_range(cfg) == doctest::Approx(128.0 / 84.0).epsilon(1e-12));
    CHECK(psa_range(cfg) < cpbe_range());
    CHECK(cpbe_range() < moose_range());
    CHECK(moose_range() < fine_range(cfg));
}

TEST_CASE("shift equivariance within each baseline's range (noiseless)") {
    OfdmConfig cfg;
    for (double f : {-0.9, -0.4, 0.3, 0.9}) {
        const double eps = f * moose_range();
        CHECK(moose_estimate(moose_body_with_cfo(cfg, eps, 307), 128) ==
              doctest::Approx(eps).epsilon(1e-9));
    }
    for (double f : {-0.9, 0.5, 0.9}) {
        const double eps = f * cpbe_range();
        CHECK(cpbe_estimate(data_symbols_with_cfo(cfg, 2, eps, 307), cfg) ==
              doctest::Approx(eps).epsilon(1e-9));
    }
}
