#ifndef ISAC_HARNESS_HPP
#define ISAC_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "isac/adaptive.hpp"
#include "isac/baselines.hpp"
#include "isac/channel.hpp"
#include "isac/core.hpp"
#include "isac/estimator.hpp"

namespace isac {

enum class DfsModel { Fixed, UniformPerFrame };

/// One experiment: numerology, sweep axes, estimator set, seeding, outputs.
/// The channel defaults to a clean unity-gain LOS link (AWGN + Doppler);
/// extra paths or antennas route the frames through the full array model.
struct ExperimentConfig {
    OfdmConfig ofdm;
    ChannelConfig channel;
    std::vector<double> snr_db = {0, 5, 10, 15, 20, 25, 30};
    int trials = 1000;
    std::vector<std::string> estimators = {"proposed", "moose", "cpbe", "psa"};
    std::uint64_t master_seed = 1;
    std::string out_dir = ".";
    GateConfig gate;
    DfsModel dfs_model = DfsModel::Fixed;
    double dfs_fixed = 0.25;
    double dfs_lo = 0.10;
    double dfs_hi = 0.25;
    int data_symbols = 2; // data symbols per communication frame
    int frames = 500;     // tracking length
};

ExperimentConfig validate_experiment(const ExperimentConfig& cfg);

/// Flat key=value config file (lines, '#' comments); keys documented in the
/// README. Unknown keys are rejected.
ExperimentConfig parse_experiment_file(const std::string& path);

struct SweepRow {
    double snr_db = 0.0;
    std::string estimator;
    std::string metric; // MSE | BER | CRLB | EVM
    double value = 0.0;
    long long trials = 0;
    std::uint64_t seed = 0;
};
bool operator==(const SweepRow& a, const SweepRow& b);

struct SweepResult {
    std::vector<SweepRow> rows;
};

/// Estimation MSE versus SNR for every configured estimator, plus one CRLB
/// row per SNR point.
SweepResult run_mse_sweep(const ExperimentConfig& cfg);

/// Uncoded BER versus SNR. Alongside the configured estimators, always
/// emits the genie "perfect" reference and the uncompensated "none" row.
SweepResult run_ber_sweep(const ExperimentConfig& cfg);

struct TrackPoint {
    int frame = 0;
    double eps_true = 0.0;
    double eps_hat = 0.0;
    CompensationMode mode = CompensationMode::CoarseAndFine;
};

struct TrackingResult {
    std::vector<TrackPoint> trace;
    double mse = 0.0;
    double snr_db = 0.0;
    int fine_invocations = 0;
};

/// Frame-by-frame adaptive estimation over a fluctuating DFS stream.
TrackingResult run_tracking(const ExperimentConfig& cfg, double snr_db);

struct ConstellationResult {
    std::vector<cplx> before;
    std::vector<cplx> after;
    std::vector<cplx> reference; // transmitted points, same order
    double evm_before = 0.0;     // RMS error over the outermost point magnitude
    double evm_after = 0.0;
};

/// Demodulated constellation before and after the proposed compensation.
ConstellationResult run_constellation(const ExperimentConfig& cfg, double snr_db, double eps);

/// CSV with the fixed header snr_db,estimator,metric,value,trials,seed and
/// deterministic row order. Values survive a parse round trip exactly.
void emit_csv(const SweepResult& result, const std::string& path);
SweepResult parse_csv(const std::string& path);
void emit_tracking_csv(const TrackingResult& result, const std::string& path);
void emit_constellation_csv(const ConstellationResult& result, const std::string& path);

/// Self-contained SVG line chart, one series per (estimator, metric),
/// log-scale y when every value is positive.
void emit_plot(const SweepResult& result, const std::string& path);

double qfunc(double x);
/// Exact Gray-mapped QAM bit error rate over AWGN (orders 4 and 16).
double qam_awgn_ber(int order, double snr_linear);

/// Test/benchmark surface: one communication frame and its receive chain.
struct CommFrame {
    IQBuffer tx;
    std::vector<QamSymbolVector> tx_freq;       // per data symbol
    std::vector<std::vector<std::uint8_t>> bits; // per data symbol, data bins only
    std::vector<cplx> head_body;                 // known preamble body (as sent)
    PilotSpec pilots;                            // empty when pilots are off
};

enum class FrameHead { ThreeBlock, Moose };

/// Builds [preamble | data...]; the preamble symbol is scaled to the data
/// symbols' average time power so one SNR figure describes the whole frame.
CommFrame make_comm_frame(const OfdmConfig& cfg, int n_data, RngStream& rng, FrameHead head,
                          bool with_pilots);

/// CFO compensation by eps_hat, then (when receiver_estimation is set) the
/// preamble-derived complex gain reference and, if pilots are present, a
/// per-symbol pilot common-phase correction. Returns equalized data symbols.
std::vector<QamSymbolVector> receive_frame(const IQBuffer& rx, const CommFrame& ref,
                                           const OfdmConfig& cfg, double eps_hat,
                                           bool receiver_estimation);

} // namespace isac

#endif
