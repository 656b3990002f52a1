#include "isac/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "isac/dsp.hpp"

namespace isac {

namespace {

constexpr std::uint64_t kKindMse = 1;
constexpr std::uint64_t kKindBer = 2;
constexpr std::uint64_t kKindTrack = 3;
constexpr std::uint64_t kKindConstellation = 4;

RngStream trial_stream(const ExperimentConfig& cfg, std::uint64_t kind, std::uint64_t snr_idx,
                       std::uint64_t trial) {
    return RngStream(cfg.master_seed, (kind << 56) + (snr_idx << 40) + trial);
}

double draw_dfs(const ExperimentConfig& cfg, RngStream& rng) {
    if (cfg.dfs_model == DfsModel::Fixed) return cfg.dfs_fixed;
    return rng.uniform(cfg.dfs_lo, cfg.dfs_hi);
}

bool trivial_channel(const ChannelConfig& ch) {
    return ch.n_antennas == 1 && ch.paths.size() == 1 && ch.paths.front().delay == 0 &&
           ch.paths.front().gain == cplx{1.0, 0.0};
}

/// CFO (and, when configured, multipath/array) application. Noise is added
/// separately so SNR always refers to the received signal power.
IQBuffer through_channel(const IQBuffer& tx, const ExperimentConfig& cfg, double eps,
                         RngStream& rng) {
    ChannelConfig ch = cfg.channel;
    ch.n_subcarriers = cfg.ofdm.n_subcarriers;
    ch.sample_period_s = 1.0 / cfg.ofdm.sample_rate_hz();
    ch.doppler_normalized = eps;
    if (trivial_channel(ch)) return apply_cfo(tx, eps, cfg.ofdm.n_subcarriers);
    return beamform(apply_channel(tx, ch, rng, 0.0), matched_weights(ch));
}

std::vector<std::uint8_t> random_bits(RngStream& rng, std::size_t count) {
    std::vector<std::uint8_t> bits(count);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_u64() & 1);
    return bits;
}

IQBuffer slice(const IQBuffer& x, std::size_t begin, std::size_t len) {
    IQBuffer out;
    out.sample_rate_hz = x.sample_rate_hz;
    out.samples.assign(x.samples.begin() + begin, x.samples.begin() + begin + len);
    return out;
}

QamSymbolVector demod_symbol_at(const IQBuffer& x, const OfdmConfig& cfg, int symbol_index) {
    OfdmSymbol sym;
    sym.has_cp = true;
    sym.time_samples =
        slice(x, static_cast<std::size_t>(symbol_index) * cfg.symbol_len(), cfg.symbol_len());
    return ofdm_demodulate(sym, cfg);
}

int bits_per_symbol(int order) {
    switch (order) {
        case 4: return 2;
        case 16: return 4;
        case 64: return 6;
        default: throw std::invalid_argument("unsupported modulation order");
    }
}

struct EstimatorKind {
    enum Value { Proposed, CoarseOnly, Moose, Cpbe, Psa, Perfect, None } value;
};

EstimatorKind::Value estimator_from_label(const std::string& label) {
    if (label == "proposed") return EstimatorKind::Proposed;
    if (label == "coarse") return EstimatorKind::CoarseOnly;
    if (label == "moose") return EstimatorKind::Moose;
    if (label == "cpbe") return EstimatorKind::Cpbe;
    if (label == "psa") return EstimatorKind::Psa;
    if (label == "perfect") return EstimatorKind::Perfect;
    if (label == "none") return EstimatorKind::None;
    throw std::invalid_argument("unknown estimator label: " + label);
}

} // namespace

ExperimentConfig validate_experiment(const ExperimentConfig& cfg) {
    validate_config(cfg.ofdm);
    if (cfg.snr_db.empty()) throw std::invalid_argument("snr_db list must be non-empty");
    if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (cfg.estimators.empty()) throw std::invalid_argument("estimator list must be non-empty");
    for (const auto& e : cfg.estimators) estimator_from_label(e);
    if (cfg.data_symbols < 1) throw std::invalid_argument("data_symbols must be >= 1");
    if (cfg.frames < 1) throw std::invalid_argument("frames must be >= 1");
    if (cfg.gate.threshold <= 0.0) throw std::invalid_argument("gate threshold must be > 0");
    if (cfg.gate.window < 2) throw std::invalid_argument("gate window must be >= 2");

    const double range = fine_range(cfg.ofdm);
    const double lo = cfg.dfs_model == DfsModel::Fixed ? cfg.dfs_fixed : cfg.dfs_lo;
    const double hi = cfg.dfs_model == DfsModel::Fixed ? cfg.dfs_fixed : cfg.dfs_hi;
    if (lo > hi) throw std::invalid_argument("dfs_lo must be <= dfs_hi");
    if (lo < -range || hi > range)
        throw std::invalid_argument("dfs bounds exceed the total estimable range");
    return cfg;
}

CommFrame make_comm_frame(const OfdmConfig& cfg, int n_data, RngStream& rng, FrameHead head,
                          bool with_pilots) {
    if (n_data < 1) throw std::invalid_argument("make_comm_frame: need at least one data symbol");
    const int n = cfg.n_subcarriers;

    CommFrame frame;
    OfdmSymbol head_symbol;
    if (head == FrameHead::ThreeBlock) {
        head_symbol = generate_preamble(cfg.preamble, cfg);
        // Match the data symbols' average time power so one SNR figure
        // describes the whole frame.
        const double gain = 1.0 / std::sqrt(static_cast<double>(n));
        for (auto& s : head_symbol.time_samples.samples) s *= gain;
    } else {
        head_symbol = make_moose_preamble(cfg, rng);
    }
    frame.head_body.assign(head_symbol.time_samples.samples.begin() + cfg.cp_len,
                           head_symbol.time_samples.samples.end());

    if (with_pilots) frame.pilots = default_pilots(cfg);
    std::vector<bool> is_pilot(n, false);
    for (std::size_t i = 0; i < frame.pilots.subcarriers.size(); ++i)
        is_pilot[frame.pilots.subcarriers[i]] = true;
    const int n_data_bins = n - static_cast<int>(frame.pilots.subcarriers.size());
    const int bps = bits_per_symbol(cfg.modulation_order);

    std::vector<OfdmSymbol> data_symbols;
    data_symbols.reserve(n_data);
    for (int m = 0; m < n_data; ++m) {
        auto bits = random_bits(rng, static_cast<std::size_t>(n_data_bins) * bps);
        QamSymbolVector mapped = qam_map(bits, cfg.modulation_order);
        QamSymbolVector freq;
        freq.symbols.resize(n);
        std::size_t next_data = 0, next_pilot = 0;
        for (int k = 0; k < n; ++k) {
            if (is_pilot[k])
                freq.symbols[k] = frame.pilots.values[next_pilot++];
            else
                freq.symbols[k] = mapped.symbols[next_data++];
        }
        frame.bits.push_back(std::move(bits));
        frame.tx_freq.push_back(freq);
        data_symbols.push_back(ofdm_modulate(freq, cfg));
    }
    frame.tx = build_frame(head_symbol, data_symbols);
    return frame;
}

std::vector<QamSymbolVector> receive_frame(const IQBuffer& rx, const CommFrame& ref,
                                           const OfdmConfig& cfg, double eps_hat,
                                           bool receiver_estimation) {
    const int n = cfg.n_subcarriers;
    const IQBuffer comp = compensate(rx, eps_hat, n);

    cplx gain{1.0, 0.0};
    if (receiver_estimation) {
        cplx num{0.0, 0.0};
        double den = 0.0;
        for (int i = 0; i < n; ++i) {
            num += comp[cfg.cp_len + i] * std::conj(ref.head_body[i]);
            den += std::norm(ref.head_body[i]);
        }
        if (den > 0.0 && std::abs(num) > 0.0) gain = num / den;
    }

    std::vector<QamSymbolVector> out;
    const int n_data = static_cast<int>(ref.tx_freq.size());
    for (int m = 0; m < n_data; ++m) {
        QamSymbolVector z = demod_symbol_at(comp, cfg, 1 + m);
        for (auto& v : z.symbols) v /= gain;
        if (receiver_estimation && !ref.pilots.subcarriers.empty()) {
            cplx acc{0.0, 0.0};
            for (std::size_t i = 0; i < ref.pilots.subcarriers.size(); ++i)
                acc += z.symbols[ref.pilots.subcarriers[i]] * std::conj(ref.pilots.values[i]);
            if (std::abs(acc) > 0.0) {
                const cplx rot = std::conj(acc) / std::abs(acc);
                for (auto& v : z.symbols) v *= rot;
            }
        }
        out.push_back(std::move(z));
    }
    return out;
}

namespace {

/// Frame layout + estimate for one MSE trial of one estimator.
double mse_trial_estimate(EstimatorKind::Value kind, const ExperimentConfig& cfg, double eps,
                          double snr_db, RngStream& trial) {
    const OfdmConfig& ofdm = cfg.ofdm;
    switch (kind) {
        case EstimatorKind::Proposed:
        case EstimatorKind::CoarseOnly: {
            RngStream bits = trial.substream(1);
            RngStream noise = trial.substream(2);
            RngStream chan = trial.substream(3);
            CommFrame frame =
                make_comm_frame(ofdm, ofdm.burst_symbols, bits, FrameHead::ThreeBlock, false);
            IQBuffer rx = add_awgn(through_channel(frame.tx, cfg, eps, chan), snr_db, noise);
            const auto mode = kind == EstimatorKind::Proposed ? CompensationMode::CoarseAndFine
                                                              : CompensationMode::CoarseOnly;
            return estimate_pipeline(rx, frame.tx_freq, ofdm, mode).eps_total;
        }
        case EstimatorKind::Moose: {
            RngStream head = trial.substream(4);
            RngStream noise = trial.substream(5);
            RngStream chan = trial.substream(6);
            OfdmSymbol sym = make_moose_preamble(ofdm, head);
            IQBuffer rx =
                add_awgn(through_channel(sym.time_samples, cfg, eps, chan), snr_db, noise);
            return moose_estimate(slice(rx, ofdm.cp_len, ofdm.n_subcarriers),
                                  ofdm.n_subcarriers);
        }
        case EstimatorKind::Cpbe: {
            RngStream bits = trial.substream(7);
            RngStream noise = trial.substream(8);
            RngStream chan = trial.substream(9);
            auto b = random_bits(bits, static_cast<std::size_t>(ofdm.n_subcarriers) *
                                           bits_per_symbol(ofdm.modulation_order));
            OfdmSymbol sym = ofdm_modulate(qam_map(b, ofdm.modulation_order), ofdm);
            IQBuffer rx =
                add_awgn(through_channel(sym.time_samples, cfg, eps, chan), snr_db, noise);
            return cpbe_estimate(rx, ofdm);
        }
        case EstimatorKind::Psa: {
            RngStream bits = trial.substream(10);
            RngStream noise = trial.substream(11);
            RngStream chan = trial.substream(12);
            PilotSpec pilots = default_pilots(ofdm);
            std::vector<bool> is_pilot(ofdm.n_subcarriers, false);
            for (int k : pilots.subcarriers) is_pilot[k] = true;
            const int bps = bits_per_symbol(ofdm.modulation_order);
            const int nd = ofdm.n_subcarriers - static_cast<int>(pilots.subcarriers.size());

            std::vector<OfdmSymbol> syms;
            for (int m = 0; m < 2; ++m) {
                auto b = random_bits(bits, static_cast<std::size_t>(nd) * bps);
                QamSymbolVector mapped = qam_map(b, ofdm.modulation_order);
                QamSymbolVector freq;
                freq.symbols.resize(ofdm.n_subcarriers);
                std::size_t di = 0, pi = 0;
                for (int k = 0; k < ofdm.n_subcarriers; ++k)
                    freq.symbols[k] = is_pilot[k] ? pilots.values[pi++] : mapped.symbols[di++];
                syms.push_back(ofdm_modulate(freq, ofdm));
            }
            IQBuffer tx;
            tx.sample_rate_hz = ofdm.sample_rate_hz();
            for (const auto& s : syms)
                tx.samples.insert(tx.samples.end(), s.time_samples.samples.begin(),
                                  s.time_samples.samples.end());
            IQBuffer rx = add_awgn(through_channel(tx, cfg, eps, chan), snr_db, noise);
            return psa_estimate(demod_symbol_at(rx, ofdm, 0), demod_symbol_at(rx, ofdm, 1),
                                pilots, ofdm);
        }
        case EstimatorKind::Perfect:
            return eps;
        case EstimatorKind::None:
            return 0.0;
    }
    throw std::logic_error("unreachable");
}

} // namespace

SweepResult run_mse_sweep(const ExperimentConfig& cfg_in) {
    const ExperimentConfig cfg = validate_experiment(cfg_in);
    SweepResult result;
    for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
        const double snr = cfg.snr_db[si];
        for (const auto& label : cfg.estimators) {
            const auto kind = estimator_from_label(label);
            double acc = 0.0;
            for (int t = 0; t < cfg.trials; ++t) {
                RngStream trial = trial_stream(cfg, kKindMse, si, static_cast<std::uint64_t>(t));
                RngStream dfs_rng = trial.substream(0);
                const double eps = draw_dfs(cfg, dfs_rng);
                const double est = mse_trial_estimate(kind, cfg, eps, snr, trial);
                acc += (est - eps) * (est - eps);
            }
            result.rows.push_back(
                {snr, label, "MSE", acc / cfg.trials, cfg.trials, cfg.master_seed});
        }
        result.rows.push_back({snr, "crlb", "CRLB",
                               crlb(cfg.ofdm.preamble.block_len, db_to_linear(snr)), cfg.trials,
                               cfg.master_seed});
    }
    return result;
}

SweepResult run_ber_sweep(const ExperimentConfig& cfg_in) {
    const ExperimentConfig cfg = validate_experiment(cfg_in);
    if (cfg.data_symbols < 2)
        throw std::invalid_argument("run_ber_sweep: need at least 2 data symbols per frame");

    // The genie reference and the uncompensated row frame every BER figure.
    std::vector<std::string> labels = {"perfect"};
    for (const auto& e : cfg.estimators)
        if (e != "perfect" && e != "none" && e != "coarse") labels.push_back(e);
    labels.push_back("none");

    SweepResult result;
    for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
        const double snr = cfg.snr_db[si];
        for (const auto& label : labels) {
            const auto kind = estimator_from_label(label);
            const FrameHead head =
                kind == EstimatorKind::Moose ? FrameHead::Moose : FrameHead::ThreeBlock;
            long long errors = 0, bits_total = 0;
            for (int t = 0; t < cfg.trials; ++t) {
                RngStream trial = trial_stream(cfg, kKindBer, si, static_cast<std::uint64_t>(t));
                RngStream dfs_rng = trial.substream(0);
                const double eps = draw_dfs(cfg, dfs_rng);

                // Streams are keyed by frame type, not estimator, so rows
                // sharing a head type see identical frames and noise.
                const int base = head == FrameHead::ThreeBlock ? 1 : 4;
                RngStream frame_rng = trial.substream(base);
                RngStream noise = trial.substream(base + 1);
                RngStream chan = trial.substream(base + 2);
                CommFrame frame = make_comm_frame(cfg.ofdm, cfg.data_symbols, frame_rng, head, true);
                IQBuffer rx = add_awgn(through_channel(frame.tx, cfg, eps, chan), snr, noise);

                double est = 0.0;
                switch (kind) {
                    case EstimatorKind::Perfect: est = eps; break;
                    case EstimatorKind::None: est = 0.0; break;
                    case EstimatorKind::Proposed:
                        est = estimate_pipeline(rx, frame.tx_freq, cfg.ofdm,
                                                CompensationMode::CoarseAndFine)
                                  .eps_total;
                        break;
                    case EstimatorKind::CoarseOnly:
                        est = estimate_pipeline(rx, frame.tx_freq, cfg.ofdm,
                                                CompensationMode::CoarseOnly)
                                  .eps_total;
                        break;
                    case EstimatorKind::Moose:
                        est = moose_estimate(slice(rx, cfg.ofdm.cp_len, cfg.ofdm.n_subcarriers),
                                             cfg.ofdm.n_subcarriers);
                        break;
                    case EstimatorKind::Cpbe: est = cpbe_estimate(rx, cfg.ofdm); break;
                    case EstimatorKind::Psa:
                        est = psa_estimate(demod_symbol_at(rx, cfg.ofdm, 1),
                                           demod_symbol_at(rx, cfg.ofdm, 2), frame.pilots,
                                           cfg.ofdm);
                        break;
                }

                const bool receiver_est =
                    kind != EstimatorKind::Perfect && kind != EstimatorKind::None;
                auto symbols = receive_frame(rx, frame, cfg.ofdm, est, receiver_est);
                for (std::size_t m = 0; m < symbols.size(); ++m) {
                    QamSymbolVector data_bins;
                    std::vector<bool> is_pilot(cfg.ofdm.n_subcarriers, false);
                    for (int k : frame.pilots.subcarriers) is_pilot[k] = true;
                    for (int k = 0; k < cfg.ofdm.n_subcarriers; ++k)
                        if (!is_pilot[k]) data_bins.symbols.push_back(symbols[m][k]);
                    auto decided = qam_demap(data_bins, cfg.ofdm.modulation_order);
                    const auto& sent = frame.bits[m];
                    for (std::size_t i = 0; i < sent.size(); ++i)
                        errors += decided[i] != sent[i] ? 1 : 0;
                    bits_total += static_cast<long long>(sent.size());
                }
            }
            result.rows.push_back({snr, label, "BER",
                                   static_cast<double>(errors) / static_cast<double>(bits_total),
                                   bits_total, cfg.master_seed});
        }
    }
    return result;
}

TrackingResult run_tracking(const ExperimentConfig& cfg_in, double snr_db) {
    const ExperimentConfig cfg = validate_experiment(cfg_in);
    TrackingResult out;
    out.snr_db = snr_db;
    AdaptiveState state(cfg.gate);
    double acc = 0.0;
    for (int f = 0; f < cfg.frames; ++f) {
        RngStream trial = trial_stream(cfg, kKindTrack, 0, static_cast<std::uint64_t>(f));
        RngStream dfs_rng = trial.substream(0);
        RngStream bits = trial.substream(1);
        RngStream noise = trial.substream(2);
        RngStream chan = trial.substream(3);
        const double eps = draw_dfs(cfg, dfs_rng);
        CommFrame frame =
            make_comm_frame(cfg.ofdm, cfg.ofdm.burst_symbols, bits, FrameHead::ThreeBlock, false);
        IQBuffer rx = add_awgn(through_channel(frame.tx, cfg, eps, chan), snr_db, noise);
        AdaptiveFrameResult res = process_frame(rx, frame.tx_freq, cfg.ofdm, state);
        out.trace.push_back({f, eps, res.record.eps_total, res.record.mode});
        if (res.record.mode == CompensationMode::CoarseAndFine) ++out.fine_invocations;
        acc += (res.record.eps_total - eps) * (res.record.eps_total - eps);
    }
    out.mse = acc / cfg.frames;
    return out;
}

ConstellationResult run_constellation(const ExperimentConfig& cfg_in, double snr_db, double eps) {
    const ExperimentConfig cfg = validate_experiment(cfg_in);
    RngStream trial = trial_stream(cfg, kKindConstellation, 0, 0);
    RngStream bits = trial.substream(1);
    RngStream noise = trial.substream(2);
    RngStream chan = trial.substream(3);
    CommFrame frame =
        make_comm_frame(cfg.ofdm, cfg.data_symbols, bits, FrameHead::ThreeBlock, false);
    IQBuffer rx = add_awgn(through_channel(frame.tx, cfg, eps, chan), snr_db, noise);

    const double est =
        estimate_pipeline(rx, frame.tx_freq, cfg.ofdm, CompensationMode::CoarseAndFine).eps_total;

    auto before = receive_frame(rx, frame, cfg.ofdm, 0.0, false);
    auto after = receive_frame(rx, frame, cfg.ofdm, est, true);

    ConstellationResult out;
    double err_before = 0.0, err_after = 0.0;
    std::size_t count = 0;
    for (std::size_t m = 0; m < frame.tx_freq.size(); ++m) {
        for (int k = 0; k < cfg.ofdm.n_subcarriers; ++k) {
            const cplx ref = frame.tx_freq[m][k];
            out.before.push_back(before[m][k]);
            out.after.push_back(after[m][k]);
            out.reference.push_back(ref);
            err_before += std::norm(before[m][k] - ref);
            err_after += std::norm(after[m][k] - ref);
            ++count;
        }
    }
    const double peak = qam_peak_amplitude(cfg.ofdm.modulation_order);
    out.evm_before = std::sqrt(err_before / count) / peak;
    out.evm_after = std::sqrt(err_after / count) / peak;
    return out;
}

bool operator==(const SweepRow& a, const SweepRow& b) {
    return a.snr_db == b.snr_db && a.estimator == b.estimator && a.metric == b.metric &&
           a.value == b.value && a.trials == b.trials && a.seed == b.seed;
}

void emit_csv(const SweepResult& result, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("emit_csv: cannot open " + path);
    std::fputs("snr_db,estimator,metric,value,trials,seed\n", f);
    for (const auto& row : result.rows)
        std::fprintf(f, "%.17g,%s,%s,%.17g,%lld,%llu\n", row.snr_db, row.estimator.c_str(),
                     row.metric.c_str(), row.value, row.trials,
                     static_cast<unsigned long long>(row.seed));
    std::fclose(f);
}

SweepResult parse_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("parse_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != "snr_db,estimator,metric,value,trials,seed")
        throw std::runtime_error("parse_csv: bad header in " + path);
    SweepResult result;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        SweepRow row;
        std::getline(ss, field, ',');
        row.snr_db = std::strtod(field.c_str(), nullptr);
        std::getline(ss, row.estimator, ',');
        std::getline(ss, row.metric, ',');
        std::getline(ss, field, ',');
        row.value = std::strtod(field.c_str(), nullptr);
        std::getline(ss, field, ',');
        row.trials = std::strtoll(field.c_str(), nullptr, 10);
        std::getline(ss, field, ',');
        row.seed = std::strtoull(field.c_str(), nullptr, 10);
        result.rows.push_back(std::move(row));
    }
    return result;
}

void emit_tracking_csv(const TrackingResult& result, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("emit_tracking_csv: cannot open " + path);
    std::fputs("frame,eps_true,eps_hat,mode\n", f);
    for (const auto& p : result.trace)
        std::fprintf(f, "%d,%.17g,%.17g,%s\n", p.frame, p.eps_true, p.eps_hat,
                     to_string(p.mode));
    std::fclose(f);
}

void emit_constellation_csv(const ConstellationResult& result, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("emit_constellation_csv: cannot open " + path);
    std::fputs("set,re,im\n", f);
    for (const auto& p : result.before) std::fprintf(f, "before,%.17g,%.17g\n", p.real(), p.imag());
    for (const auto& p : result.after) std::fprintf(f, "after,%.17g,%.17g\n", p.real(), p.imag());
    std::fclose(f);
}

namespace {

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> pts;
};

} // namespace

void emit_plot(const SweepResult& result, const std::string& path) {
    std::vector<Series> series;
    for (const auto& row : result.rows) {
        const std::string key = row.estimator + " " + row.metric;
        auto it = std::find_if(series.begin(), series.end(),
                               [&](const Series& s) { return s.name == key; });
        if (it == series.end()) {
            series.push_back({key, {}});
            it = series.end() - 1;
        }
        it->pts.emplace_back(row.snr_db, row.value);
    }
    for (auto& s : series)
        std::stable_sort(s.pts.begin(), s.pts.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });

    bool log_y = !result.rows.empty();
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.pts) {
            if (y <= 0.0) log_y = false;
            if (first) {
                xmin = xmax = x;
                ymin = ymax = y;
                first = false;
            } else {
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
                ymin = std::min(ymin, y);
                ymax = std::max(ymax, y);
            }
        }
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    double lo = log_y ? std::log10(ymin) : ymin;
    double hi = log_y ? std::log10(ymax) : ymax;
    if (hi == lo) hi = lo + 1.0;

    const double w = 720, h = 480, ml = 70, mr = 180, mt = 20, mb = 50;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
    auto py = [&](double y) {
        const double v = log_y ? std::log10(y) : y;
        return h - mb - (v - lo) / (hi - lo) * (h - mt - mb);
    };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    char buf[256];
    std::string svg;
    std::snprintf(buf, sizeof(buf),
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
                  "viewBox=\"0 0 %g %g\">\n",
                  w, h, w, h);
    svg += buf;
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", ml,
                  h - mb, w - mr, h - mb);
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", ml, mt,
                  ml, h - mb);
    svg += buf;

    for (int i = 0; i <= 5; ++i) {
        const double x = xmin + (xmax - xmin) * i / 5.0;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%g\" y=\"%g\" font-size=\"11\" text-anchor=\"middle\">%g</text>\n",
                      px(x), h - mb + 16, x);
        svg += buf;
        const double v = lo + (hi - lo) * i / 5.0;
        const double yv = log_y ? std::pow(10.0, v) : v;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%g\" y=\"%g\" font-size=\"11\" text-anchor=\"end\">%.3g</text>\n",
                      ml - 6, h - mb - (h - mt - mb) * i / 5.0 + 4, yv);
        svg += buf;
    }
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%g\" y=\"%g\" font-size=\"12\" text-anchor=\"middle\">SNR "
                  "(dB)</text>\n",
                  (ml + w - mr) / 2, h - 12);
    svg += buf;

    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = palette[i % 8];
        std::string points;
        for (const auto& [x, y] : series[i].pts) {
            std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(x), py(y));
            points += buf;
        }
        svg += "<polyline fill=\"none\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
        for (const auto& [x, y] : series[i].pts) {
            std::snprintf(buf, sizeof(buf),
                          "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2.5\" fill=\"%s\"/>\n", px(x),
                          py(y), color);
            svg += buf;
        }
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%g\" y=\"%g\" font-size=\"12\" fill=\"%s\">%s</text>\n",
                      w - mr + 10, mt + 16.0 * (i + 1), color, series[i].name.c_str());
        svg += buf;
    }
    svg += "</svg>\n";

    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("emit_plot: cannot open " + path);
    std::fwrite(svg.data(), 1, svg.size(), f);
    std::fclose(f);
}

double qfunc(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double qam_awgn_ber(int order, double snr_linear) {
    if (order == 4) return qfunc(std::sqrt(snr_linear));
    if (order == 16) {
        const double a = std::sqrt(snr_linear / 5.0);
        return (3.0 * qfunc(a) + 2.0 * qfunc(3.0 * a) - qfunc(5.0 * a)) / 4.0;
    }
    throw std::invalid_argument("qam_awgn_ber: closed form pinned for orders 4 and 16 only");
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

} // namespace

ExperimentConfig parse_experiment_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: expected key=value at line " +
                                     std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));

        if (key == "n_subcarriers") cfg.ofdm.n_subcarriers = std::stoi(val);
        else if (key == "cp_len") cfg.ofdm.cp_len = std::stoi(val);
        else if (key == "subcarrier_spacing_hz") cfg.ofdm.subcarrier_spacing_hz = std::stod(val);
        else if (key == "carrier_freq_hz") cfg.ofdm.carrier_freq_hz = std::stod(val);
        else if (key == "modulation_order") cfg.ofdm.modulation_order = std::stoi(val);
        else if (key == "burst_symbols") cfg.ofdm.burst_symbols = std::stoi(val);
        else if (key == "preamble_block_len") cfg.ofdm.preamble.block_len = std::stoi(val);
        else if (key == "preamble_seed") cfg.ofdm.preamble.base_seed = std::stoull(val);
        else if (key == "snr_db") {
            cfg.snr_db.clear();
            for (const auto& v : split(val, ',')) cfg.snr_db.push_back(std::stod(v));
        } else if (key == "trials") cfg.trials = std::stoi(val);
        else if (key == "estimators") cfg.estimators = split(val, ',');
        else if (key == "master_seed") cfg.master_seed = std::stoull(val);
        else if (key == "out_dir") cfg.out_dir = val;
        else if (key == "gate_threshold") cfg.gate.threshold = std::stod(val);
        else if (key == "gate_window") cfg.gate.window = std::stoi(val);
        else if (key == "dfs_model") {
            if (val == "fixed") cfg.dfs_model = DfsModel::Fixed;
            else if (val == "uniform") cfg.dfs_model = DfsModel::UniformPerFrame;
            else throw std::runtime_error("config: dfs_model must be fixed or uniform");
        } else if (key == "dfs_fixed") cfg.dfs_fixed = std::stod(val);
        else if (key == "dfs_lo") cfg.dfs_lo = std::stod(val);
        else if (key == "dfs_hi") cfg.dfs_hi = std::stod(val);
        else if (key == "data_symbols") cfg.data_symbols = std::stoi(val);
        else if (key == "frames") cfg.frames = std::stoi(val);
        else if (key == "n_antennas") cfg.channel.n_antennas = std::stoi(val);
        else if (key == "paths") {
            // delay:gain_re:gain_im[:aoa:aod] ; ... , first entry is the LOS path
            cfg.channel.paths.clear();
            for (const auto& p : split(val, ';')) {
                const auto f = split(p, ':');
                if (f.size() < 3)
                    throw std::runtime_error("config: path needs delay:gain_re:gain_im");
                PathSpec ps;
                ps.delay = std::stoi(f[0]);
                ps.gain = cplx(std::stod(f[1]), std::stod(f[2]));
                if (f.size() > 3) ps.aoa = std::stod(f[3]);
                if (f.size() > 4) ps.aod = std::stod(f[4]);
                ps.is_los = cfg.channel.paths.empty();
                cfg.channel.paths.push_back(ps);
            }
        }
        else throw std::runtime_error("config: unknown key '" + key + "'");
    }
    return validate_experiment(cfg);
}

} // namespace isac
