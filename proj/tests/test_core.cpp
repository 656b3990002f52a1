#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "isac/core.hpp"

using namespace isac;

TEST_CASE("validate_config accepts the default numerology") {
    OfdmConfig cfg;
    CHECK_NOTHROW(validate_config(cfg));
    CHECK(cfg.n_subcarriers == 128);
    CHECK(cfg.cp_len == 16);
    CHECK(cfg.modulation_order == 16);
}

TEST_CASE("validate_config names the offending field") {
    OfdmConfig cfg;
    cfg.n_subcarriers = 0;
    CHECK_THROWS_WITH_AS(validate_config(cfg), "n_subcarriers must be >= 2",
                         std::invalid_argument);

    cfg = OfdmConfig{};
    cfg.cp_len = 128;
    CHECK_THROWS_WITH_AS(validate_config(cfg), "cp_len must be < N", std::invalid_argument);

    cfg = OfdmConfig{};
    cfg.n_subcarriers = 100; // not a power of two
    CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);

    cfg = OfdmConfig{};
    cfg.modulation_order = 32;
    CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);

    cfg = OfdmConfig{};
    cfg.burst_symbols = 1;
    CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);

    cfg = OfdmConfig{};
    cfg.preamble.block_len = 43; // 3*43 > 128
    CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
}

TEST_CASE("gaussian_noise: zero variance gives the zero buffer") {
    RngStream rng(1, 0);
    auto buf = gaussian_noise(rng, 64, 0.0);
    for (const auto& s : buf.samples) CHECK(s == cplx{0.0, 0.0});
}

TEST_CASE("gaussian_noise: sample variance converges (law of large numbers)") {
    RngStream rng(42, 7);
    const std::size_t len = 100000;
    auto buf = gaussian_noise(rng, len, 1.0);
    double var = 0.0, re_mean = 0.0, im_mean = 0.0;
    for (const auto& s : buf.samples) {
        var += std::norm(s);
        re_mean += s.real();
        im_mean += s.imag();
    }
    var /= len;
    CHECK(var == doctest::Approx(1.0).epsilon(0.02));
    // per-component mean ~ N(0, 1/(2 len))
    CHECK(std::abs(re_mean / len) < 5.0 / std::sqrt(2.0 * len));
    CHECK(std::abs(im_mean / len) < 5.0 / std::sqrt(2.0 * len));

    // real/imag each carry half the variance
    double re_var = 0.0;
    for (const auto& s : buf.samples) re_var += s.real() * s.real();
    CHECK(re_var / len == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("gaussian_noise: invariant |var - sigma^2| <= 5 sigma^2 / sqrt(len)") {
    for (double sigma2 : {0.25, 1.0, 4.0}) {
        RngStream rng(3, static_cast<std::uint64_t>(sigma2 * 100));
        const std::size_t len = 20000;
        auto buf = gaussian_noise(rng, len, sigma2);
        double var = 0.0;
        for (const auto& s : buf.samples) var += std::norm(s);
        var /= len;
        CHECK(std::abs(var - sigma2) <= 5.0 * sigma2 / std::sqrt(static_cast<double>(len)));
    }
}

TEST_CASE("gaussian_noise rejects bad arguments") {
    RngStream rng(1, 0);
    CHECK_THROWS_AS(gaussian_noise(rng, 0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_noise(rng, 8, -1.0), std::invalid_argument);
}

TEST_CASE("RngStream: identical (seed, stream) gives bit-identical sequences") {
    RngStream a(123, 456), b(123, 456);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

    RngStream ga(9, 1), gb(9, 1);
    for (int i = 0; i < 100; ++i) CHECK(ga.gaussian() == gb.gaussian());
}

TEST_CASE("RngStream: different streams decorrelate") {
    RngStream a(123, 0), b(123, 1);
    int same = 0;
    for (int i = 0; i < 64; ++i) same += a.next_u64() == b.next_u64() ? 1 : 0;
    CHECK(same == 0);
}

TEST_CASE("RngStream: substreams are order-independent") {
    RngStream parent(77, 5);
    auto s1 = parent.substream(2);
    auto s2 = RngStream(77, 5).substream(2);
    for (int i = 0; i < 10; ++i) CHECK(s1.next_u64() == s2.next_u64());
}

TEST_CASE("db_to_linear") {
    CHECK(db_to_linear(0.0) == doctest::Approx(1.0));
    CHECK(db_to_linear(10.0) == doctest::Approx(10.0));
    CHECK(db_to_linear(3.0) == doctest::Approx(1.9953).epsilon(1e-4));
    CHECK(db_to_linear(-10.0) == doctest::Approx(0.1));
}

TEST_CASE("EstimateRecord total invariant holds by construction convention") {
    EstimateRecord rec;
    rec.eps_coarse = 1.0 / 24.0;
    rec.eps_fine = 0.01;
    rec.eps_total = rec.eps_coarse + rec.eps_fine;
    CHECK(rec.eps_total == doctest::Approx(0.0516666667).epsilon(1e-9));
}
