#ifndef ISAC_CORE_HPP
#define ISAC_CORE_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace isac {

using cplx = std::complex<double>;

/// Ordered complex baseband samples; the signal currency between modules.
struct IQBuffer {
    std::vector<cplx> samples;
    double sample_rate_hz = 0.0;

    std::size_t size() const { return samples.size(); }
    cplx& operator[](std::size_t n) { return samples[n]; }
    const cplx& operator[](std::size_t n) const { return samples[n]; }
};

/// Three-repeated-block preamble layout: [base | base | base | zero pad]
/// fills one OFDM symbol body. The base sequence is constant-modulus
/// pseudo-random, regenerated deterministically from base_seed.
struct PreambleSpec {
    int block_len = 42;           // L, samples per repeated block
    int repetitions = 3;          // fixed by the frame design
    std::uint64_t base_seed = 0x5eedc0de91ull;

    int pad_len(int n_subcarriers) const { return n_subcarriers - repetitions * block_len; }
    double ratio(int n_subcarriers) const { return static_cast<double>(n_subcarriers) / block_len; }
};

/// OFDM numerology. All DFS quantities elsewhere are normalized to
/// subcarrier_spacing_hz (eps = f_d / delta_f); Hz values are derived views.
struct OfdmConfig {
    int n_subcarriers = 128;             // N, power of two
    int cp_len = 16;                     // cyclic prefix samples
    double subcarrier_spacing_hz = 15e3; // delta_f
    double carrier_freq_hz = 28e9;       // f_c
    int modulation_order = 16;           // 4, 16 or 64
    int burst_symbols = 64;              // M, slow-time length for radar
    PreambleSpec preamble;

    double sample_rate_hz() const { return n_subcarriers * subcarrier_spacing_hz; }
    int symbol_len() const { return n_subcarriers + cp_len; }
    /// Radar Doppler bin width in normalized DFS units: N / (M (N + cp)).
    double doppler_bin() const {
        return static_cast<double>(n_subcarriers) / (static_cast<double>(burst_symbols) * symbol_len());
    }
};

enum class CompensationMode { CoarseOnly, CoarseAndFine };

inline const char* to_string(CompensationMode m) {
    return m == CompensationMode::CoarseOnly ? "coarse-only" : "coarse+fine";
}

/// One trial's ground truth and estimates, all in normalized DFS units.
/// Invariant: eps_total == eps_coarse + eps_fine (eps_fine == 0 in
/// coarse-only mode).
struct EstimateRecord {
    std::int64_t trial_index = 0;
    double snr_db = 0.0;
    double eps_true = 0.0;
    double eps_coarse = 0.0;
    double eps_fine = 0.0;
    double eps_total = 0.0;
    CompensationMode mode = CompensationMode::CoarseAndFine;
    std::string estimator_name;
    std::uint64_t seed = 0;
};

/// Deterministic per-trial random stream. Identical (master_seed, stream_id)
/// always yields the identical sample sequence, independent of scheduling.
/// xoshiro256++ seeded through a splitmix64 chain; single consumer.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

    /// Derive an independent child stream (counter-based split).
    RngStream substream(std::uint64_t key) const;

    std::uint64_t next_u64();
    /// Uniform in [0, 1).
    double uniform();
    /// Uniform in [lo, hi).
    double uniform(double lo, double hi);
    /// Standard normal via Box-Muller (pinned implementation).
    double gaussian();
    /// Complex sample with independent real/imag parts of variance var/2 each.
    cplx complex_gaussian(double var);

    std::uint64_t master_seed() const { return master_; }
    std::uint64_t stream_id() const { return stream_; }

private:
    std::uint64_t master_ = 0;
    std::uint64_t stream_ = 0;
    std::uint64_t s_[4] = {};
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Validates every OfdmConfig invariant; returns the config unchanged or
/// throws std::invalid_argument naming the offending field.
OfdmConfig validate_config(const OfdmConfig& cfg);

/// White complex Gaussian noise, total variance var per sample.
IQBuffer gaussian_noise(RngStream& stream, std::size_t len, double var,
                        double sample_rate_hz = 0.0);

double db_to_linear(double x_db);

} // namespace isac

#endif
