#include "isac/adaptive.hpp"

#include <stdexcept>

namespace isac {

RadarHistory::RadarHistory(int capacity) {
    if (capacity < 2) throw std::invalid_argument("RadarHistory: capacity must be >= 2");
    window_.assign(capacity, 0.0);
}

void RadarHistory::push(double eps_v) {
    window_[next_] = eps_v;
    next_ = (next_ + 1) % static_cast<int>(window_.size());
    if (count_ < static_cast<int>(window_.size())) ++count_;
}

double RadarHistory::mean() const {
    if (count_ == 0) return 0.0;
    double acc = 0.0;
    for (int i = 0; i < count_; ++i) acc += window_[i];
    return acc / count_;
}

std::vector<double> RadarHistory::values() const {
    std::vector<double> out;
    out.reserve(count_);
    const int cap = capacity();
    const int start = count_ < cap ? 0 : next_;
    for (int i = 0; i < count_; ++i) out.push_back(window_[(start + i) % cap]);
    return out;
}

RadarHistory update(RadarHistory history, double eps_v) {
    history.push(eps_v);
    return history;
}

double variance(const RadarHistory& history) {
    const int n = history.size();
    if (n < 2) throw std::invalid_argument("variance: need at least 2 history entries");
    const double mean = history.mean();
    double acc = 0.0;
    for (double v : history.values()) acc += (mean - v) * (mean - v);
    return acc / n;
}

CompensationMode decide(double sigma2_rad, const GateConfig& gate) {
    return sigma2_rad >= gate.threshold ? CompensationMode::CoarseAndFine
                                        : CompensationMode::CoarseOnly;
}

AdaptiveFrameResult process_frame(const IQBuffer& frame_rx,
                                  const std::vector<QamSymbolVector>& tx_data,
                                  const OfdmConfig& cfg, AdaptiveState& state) {
    const double eps_v = coarse_from_frame(frame_rx, tx_data, cfg);
    state.history.push(eps_v);

    CompensationMode mode = CompensationMode::CoarseAndFine; // warm-up policy
    if (!state.force_fine && state.history.size() >= 2)
        mode = decide(variance(state.history), state.gate);
    if (state.force_fine) mode = CompensationMode::CoarseAndFine;

    AdaptiveFrameResult out;
    out.record.mode = mode;
    out.record.eps_coarse = eps_v;
    out.record.eps_fine =
        mode == CompensationMode::CoarseAndFine ? fine_from_frame(frame_rx, cfg, eps_v) : 0.0;
    out.record.eps_total = total_estimate(out.record.eps_coarse, out.record.eps_fine);
    out.compensated = compensate(frame_rx, out.record.eps_total, cfg.n_subcarriers);
    return out;
}

} // namespace isac
