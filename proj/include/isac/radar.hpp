#ifndef ISAC_RADAR_HPP
#define ISAC_RADAR_HPP

#include <vector>

#include "isac/core.hpp"
#include "isac/ofdm.hpp"

namespace isac {

/// How the transmitted symbols entering the grid division are obtained.
/// KnownData assumes the receiver knows the whole burst; DecisionDirected
/// reconstructs data symbols by hard decisions.
enum class GridMode { KnownData, DecisionDirected };

/// Slow time x subcarrier matrix of per-symbol channel samples
/// grid[m][k] = Y_m(k) / S_m(k).
struct SymbolGrid {
    int n_symbols = 0;     // M, slow time
    int n_subcarriers = 0; // N
    std::vector<cplx> entries;
    double bin_resolution = 0.0; // normalized DFS per Doppler bin

    cplx& at(int m, int k) { return entries[static_cast<std::size_t>(m) * n_subcarriers + k]; }
    const cplx& at(int m, int k) const {
        return entries[static_cast<std::size_t>(m) * n_subcarriers + k];
    }
};

/// Doppler axis of the range-Doppler map: slow-time spectrum magnitudes
/// accumulated over subcarriers.
struct DopplerProfile {
    std::vector<double> magnitudes; // length M
    double bin_resolution = 0.0;
};

/// Builds the grid from M consecutive CP-prefixed symbols at the head of
/// frame_rx, dividing each demodulated symbol by the known (or decided)
/// transmit symbols.
SymbolGrid build_symbol_grid(const IQBuffer& frame_rx,
                             const std::vector<QamSymbolVector>& tx_symbols,
                             const OfdmConfig& cfg, GridMode mode = GridMode::KnownData);

/// Per-subcarrier slow-time transform, magnitudes accumulated over
/// subcarriers.
DopplerProfile doppler_profile(const SymbolGrid& grid);

/// Peak pick with negative-frequency wrap: bins above M/2 map to l - M.
/// eps_v = l * N / (M (N + cp)). Ties break towards the smallest |bin|.
double coarse_estimate(const DopplerProfile& profile);

/// v = eps * delta_f * c / f_c.
double velocity_from_dfs(double eps, const OfdmConfig& cfg);

} // namespace isac

#endif
