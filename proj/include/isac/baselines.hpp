#ifndef ISAC_BASELINES_HPP
#define ISAC_BASELINES_HPP

#include <vector>

#include "isac/core.hpp"
#include "isac/ofdm.hpp"

namespace isac {

/// Pilot layout shared by a pair of adjacent OFDM symbols.
struct PilotSpec {
    std::vector<int> subcarriers;
    std::vector<cplx> values; // known unit-energy symbols, one per pilot bin
};

/// Pilots on every 8th bin, pinned pseudo-random QPSK values.
PilotSpec default_pilots(const OfdmConfig& cfg);

/// Preamble for the Moose estimator: only even subcarriers are loaded, so
/// the time-domain body splits into two identical halves.
OfdmSymbol make_moose_preamble(const OfdmConfig& cfg, RngStream& rng);

/// eps = (1/pi) arg( sum_n conj(y(n)) y(n + N/2) ) over the first N samples.
/// Unambiguous for |eps| < 1.
double moose_estimate(const IQBuffer& y, int n_subcarriers);

/// CP correlation at lag N, averaged over every full symbol in the buffer;
/// eps = arg(sum)/2pi, unambiguous for |eps| < 1/2.
double cpbe_estimate(const IQBuffer& y, const OfdmConfig& cfg);

/// Pilot products between two adjacent demodulated symbols;
/// eps = arg(sum) N / (2 pi (N + cp)), unambiguous for |eps| < N/(2(N+cp)).
double psa_estimate(const QamSymbolVector& y1, const QamSymbolVector& y2, const PilotSpec& pilots,
                    const OfdmConfig& cfg);

/// Unambiguous half-ranges in normalized DFS units.
double moose_range();
double cpbe_range();
double psa_range(const OfdmConfig& cfg);
double fine_range(const OfdmConfig& cfg);

} // namespace isac

#endif
