#ifndef ISAC_ADAPTIVE_HPP
#define ISAC_ADAPTIVE_HPP

#include <vector>

#include "isac/core.hpp"
#include "isac/estimator.hpp"

namespace isac {

/// Ring of the most recent radar coarse estimates.
struct RadarHistory {
    explicit RadarHistory(int capacity = 8);

    void push(double eps_v);
    int size() const { return count_; }
    int capacity() const { return static_cast<int>(window_.size()); }
    double mean() const;
    /// Chronological (oldest first) copy of the window contents.
    std::vector<double> values() const;

private:
    std::vector<double> window_;
    int count_ = 0;
    int next_ = 0;
};

struct GateConfig {
    double threshold = 1e-4; // delta, normalized-DFS^2
    int window = 8;
};

/// History update returning the new state (oldest entry dropped at capacity).
RadarHistory update(RadarHistory history, double eps_v);

/// Population variance of the window about its mean; needs >= 2 entries.
double variance(const RadarHistory& history);

/// CoarseAndFine iff sigma2_rad >= delta.
CompensationMode decide(double sigma2_rad, const GateConfig& gate);

/// Per-session gate state. force_fine bypasses the gate entirely.
struct AdaptiveState {
    RadarHistory history;
    GateConfig gate;
    bool force_fine = false;

    explicit AdaptiveState(GateConfig g = {}) : history(g.window), gate(g) {}
};

struct AdaptiveFrameResult {
    IQBuffer compensated;
    EstimateRecord record;
};

/// One frame through the gate: coarse always runs and is pushed into the
/// history; the fine stage runs during warm-up (fewer than 2 samples), when
/// the window variance trips the threshold, or when force_fine is set. The
/// frame is compensated by the total estimate.
AdaptiveFrameResult process_frame(const IQBuffer& frame_rx,
                                  const std::vector<QamSymbolVector>& tx_data,
                                  const OfdmConfig& cfg, AdaptiveState& state);

} // namespace isac

#endif
