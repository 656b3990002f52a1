#include "isac/radar.hpp"

#include <cmath>
#include <stdexcept>

#include "isac/dsp.hpp"

namespace isac {

SymbolGrid build_symbol_grid(const IQBuffer& frame_rx,
                             const std::vector<QamSymbolVector>& tx_symbols,
                             const OfdmConfig& cfg, GridMode mode) {
    const int n = cfg.n_subcarriers;
    const int slen = cfg.symbol_len();
    const int m_symbols = static_cast<int>(tx_symbols.size());
    if (m_symbols == 0) throw std::invalid_argument("build_symbol_grid: no transmit symbols");
    if (frame_rx.size() < static_cast<std::size_t>(m_symbols) * slen)
        throw std::invalid_argument("build_symbol_grid: frame shorter than the burst");

    SymbolGrid grid;
    grid.n_symbols = m_symbols;
    grid.n_subcarriers = n;
    grid.bin_resolution = static_cast<double>(n) / (static_cast<double>(m_symbols) * slen);
    grid.entries.resize(static_cast<std::size_t>(m_symbols) * n);

    std::vector<cplx> body(n);
    for (int m = 0; m < m_symbols; ++m) {
        const std::size_t off = static_cast<std::size_t>(m) * slen + cfg.cp_len;
        for (int i = 0; i < n; ++i) body[i] = frame_rx[off + i];
        std::vector<cplx> rx = dsp::transform(body, false);

        if (mode == GridMode::KnownData) {
            const auto& tx = tx_symbols[m];
            if (static_cast<int>(tx.size()) != n)
                throw std::invalid_argument("build_symbol_grid: tx symbol length mismatch");
            for (int k = 0; k < n; ++k) {
                if (std::norm(tx[k]) == 0.0)
                    throw std::invalid_argument("build_symbol_grid: zero-valued tx symbol");
                grid.at(m, k) = rx[k] / tx[k];
            }
        } else {
            // Hard decisions on the raw demodulated symbol stand in for the
            // unknown data. Reliable only when rotation over the burst stays
            // well inside a decision region.
            QamSymbolVector decided;
            decided.symbols = rx;
            auto bits = qam_demap(decided, cfg.modulation_order);
            QamSymbolVector ref = qam_map(bits, cfg.modulation_order);
            for (int k = 0; k < n; ++k) grid.at(m, k) = rx[k] / ref[k];
        }
    }
    return grid;
}

DopplerProfile doppler_profile(const SymbolGrid& grid) {
    const int m_symbols = grid.n_symbols;
    const int n = grid.n_subcarriers;
    if (m_symbols <= 0 || n <= 0) throw std::invalid_argument("doppler_profile: empty grid");

    DopplerProfile profile;
    profile.bin_resolution = grid.bin_resolution;
    profile.magnitudes.assign(m_symbols, 0.0);

    std::vector<cplx> slow(m_symbols);
    for (int k = 0; k < n; ++k) {
        for (int m = 0; m < m_symbols; ++m) slow[m] = grid.at(m, k);
        std::vector<cplx> spec = dsp::transform(slow, false);
        for (int l = 0; l < m_symbols; ++l) profile.magnitudes[l] += std::abs(spec[l]);
    }
    return profile;
}

double coarse_estimate(const DopplerProfile& profile) {
    const int m_symbols = static_cast<int>(profile.magnitudes.size());
    if (m_symbols == 0) throw std::invalid_argument("coarse_estimate: empty profile");

    auto signed_bin = [&](int l) { return l > m_symbols / 2 ? l - m_symbols : l; };

    int best = 0;
    for (int l = 1; l < m_symbols; ++l) {
        const double a = profile.magnitudes[l];
        const double b = profile.magnitudes[best];
        if (a > b) {
            best = l;
        } else if (a == b) {
            const int sa = std::abs(signed_bin(l));
            const int sb = std::abs(signed_bin(best));
            if (sa < sb || (sa == sb && signed_bin(l) > signed_bin(best))) best = l;
        }
    }
    return signed_bin(best) * profile.bin_resolution;
}

double velocity_from_dfs(double eps, const OfdmConfig& cfg) {
    constexpr double c = 299792458.0;
    if (cfg.carrier_freq_hz <= 0.0) throw std::invalid_argument("velocity_from_dfs: f_c must be > 0");
    return eps * cfg.subcarrier_spacing_hz * c / cfg.carrier_freq_hz;
}

} // namespace isac
