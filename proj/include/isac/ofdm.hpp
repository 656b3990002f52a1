#ifndef ISAC_OFDM_HPP
#define ISAC_OFDM_HPP

#include <cstdint>
#include <vector>

#include "isac/core.hpp"

namespace isac {

/// Frequency-domain constellation points, unit average energy over a full
/// Gray-mapped alphabet.
struct QamSymbolVector {
    std::vector<cplx> symbols;

    std::size_t size() const { return symbols.size(); }
    cplx& operator[](std::size_t k) { return symbols[k]; }
    const cplx& operator[](std::size_t k) const { return symbols[k]; }
};

/// One time-domain OFDM symbol. With has_cp, the first cp samples equal the
/// last cp samples.
struct OfdmSymbol {
    IQBuffer time_samples;
    bool has_cp = true;
};

struct FrameLayout {
    OfdmSymbol preamble_symbol;
    std::vector<OfdmSymbol> data_symbols;
};

/// Gray-coded QAM mapping, normalized to unit average energy.
/// Per-axis Gray code (MSB-first per symbol, first half of the bits on I):
/// 16QAM two-bit axis labels 00,01,11,10 -> levels -3,-1,+1,+3 over sqrt(10),
/// so bits 0000 map to (-3-3j)/sqrt(10). 4QAM and 64QAM follow the same
/// per-axis construction.
QamSymbolVector qam_map(const std::vector<std::uint8_t>& bits, int order);

/// Minimum-distance hard decisions, inverse of qam_map on noiseless input.
std::vector<std::uint8_t> qam_demap(const QamSymbolVector& symbols, int order);

/// Magnitude of the outermost constellation point (e.g. sqrt(1.8) for 16QAM).
double qam_peak_amplitude(int order);

/// x(n) = (1/N) sum_k s(k) e^{j2pi nk/N}, cyclic prefix prepended.
OfdmSymbol ofdm_modulate(const QamSymbolVector& freq, const OfdmConfig& cfg);

/// Strips the CP and applies the unscaled forward transform, so the
/// modulate/demodulate pair is an exact identity.
QamSymbolVector ofdm_demodulate(const OfdmSymbol& sym, const OfdmConfig& cfg);

/// Serial sample stream, preamble first.
IQBuffer build_frame(const OfdmSymbol& preamble, const std::vector<OfdmSymbol>& data);

} // namespace isac

#endif
