#include "isac/core.hpp"

#include <cmath>
#include <stdexcept>

namespace isac {

namespace {

// splitmix64 (Vigna), used only to expand seeds.
std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

} // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_(master_seed), stream_(stream_id) {
    // Counter-based derivation: the engine state is a pure function of
    // (master_seed, stream_id), so parallel scheduling cannot reorder draws.
    std::uint64_t x = master_seed;
    std::uint64_t a = splitmix64(x);
    x ^= 0x2545f4914f6cdd1dull * (stream_id + 1);
    s_[0] = splitmix64(x);
    s_[1] = splitmix64(x) ^ a;
    s_[2] = splitmix64(x);
    s_[3] = splitmix64(x) | 1ull;
}

RngStream RngStream::substream(std::uint64_t key) const {
    std::uint64_t x = stream_ ^ (key * 0x9e3779b97f4a7c15ull + 0x100000001b3ull);
    return RngStream(master_, splitmix64(x));
}

std::uint64_t RngStream::next_u64() {
    // xoshiro256++
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RngStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

double RngStream::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * M_PI * u2;
    spare_ = mag * std::sin(ang);
    have_spare_ = true;
    return mag * std::cos(ang);
}

cplx RngStream::complex_gaussian(double var) {
    if (var == 0.0) return {0.0, 0.0};
    const double s = std::sqrt(var / 2.0);
    const double re = s * gaussian();
    const double im = s * gaussian();
    return {re, im};
}

OfdmConfig validate_config(const OfdmConfig& cfg) {
    const int n = cfg.n_subcarriers;
    if (n < 2) throw std::invalid_argument("n_subcarriers must be >= 2");
    if ((n & (n - 1)) != 0) throw std::invalid_argument("n_subcarriers must be a power of two");
    if (cfg.cp_len <= 0) throw std::invalid_argument("cp_len must be > 0");
    if (cfg.cp_len >= n) throw std::invalid_argument("cp_len must be < N");
    if (cfg.subcarrier_spacing_hz <= 0.0)
        throw std::invalid_argument("subcarrier_spacing_hz must be > 0");
    if (cfg.carrier_freq_hz <= 0.0) throw std::invalid_argument("carrier_freq_hz must be > 0");
    if (cfg.modulation_order != 4 && cfg.modulation_order != 16 && cfg.modulation_order != 64)
        throw std::invalid_argument("modulation_order must be one of 4, 16, 64");
    if (cfg.burst_symbols < 2) throw std::invalid_argument("burst_symbols must be >= 2");
    if (cfg.preamble.block_len <= 0) throw std::invalid_argument("preamble.block_len must be > 0");
    if (cfg.preamble.repetitions != 3)
        throw std::invalid_argument("preamble.repetitions must be 3");
    if (cfg.preamble.repetitions * cfg.preamble.block_len > n)
        throw std::invalid_argument("preamble: 3*block_len must be <= N");
    return cfg;
}

IQBuffer gaussian_noise(RngStream& stream, std::size_t len, double var, double sample_rate_hz) {
    if (len == 0) throw std::invalid_argument("gaussian_noise: len must be > 0");
    if (var < 0.0) throw std::invalid_argument("gaussian_noise: variance must be >= 0");
    IQBuffer out;
    out.sample_rate_hz = sample_rate_hz;
    out.samples.resize(len);
    for (auto& s : out.samples) s = stream.complex_gaussian(var);
    return out;
}

double db_to_linear(double x_db) { return std::pow(10.0, x_db / 10.0); }

} // namespace isac
