#include "isac/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace isac {

PilotSpec default_pilots(const OfdmConfig& cfg) {
    PilotSpec p;
    RngStream rng(0x9a17075eedull, 1);
    for (int k = 0; k < cfg.n_subcarriers; k += 8) {
        p.subcarriers.push_back(k);
        const int q = static_cast<int>(rng.next_u64() & 3);
        const double phase = M_PI / 4.0 + q * M_PI / 2.0;
        p.values.emplace_back(std::cos(phase), std::sin(phase));
    }
    return p;
}

OfdmSymbol make_moose_preamble(const OfdmConfig& cfg, RngStream& rng) {
    QamSymbolVector freq;
    freq.symbols.assign(cfg.n_subcarriers, cplx{0.0, 0.0});
    const double amp = std::sqrt(2.0); // unit average energy over all N bins
    for (int k = 0; k < cfg.n_subcarriers; k += 2) {
        const double phase = rng.uniform(0.0, 2.0 * M_PI);
        freq.symbols[k] = amp * cplx(std::cos(phase), std::sin(phase));
    }
    return ofdm_modulate(freq, cfg);
}

double moose_estimate(const IQBuffer& y, int n_subcarriers) {
    const int n = n_subcarriers;
    if (y.size() < static_cast<std::size_t>(n))
        throw std::invalid_argument("moose_estimate: buffer shorter than one symbol body");
    cplx acc{0.0, 0.0};
    for (int i = 0; i < n / 2; ++i) acc += std::conj(y[i]) * y[i + n / 2];
    if (std::abs(acc) == 0.0) throw std::invalid_argument("moose_estimate: zero-energy input");
    return std::arg(acc) / M_PI;
}

double cpbe_estimate(const IQBuffer& y, const OfdmConfig& cfg) {
    const int slen = cfg.symbol_len();
    const int n_full = static_cast<int>(y.size()) / slen;
    if (n_full < 1) throw std::invalid_argument("cpbe_estimate: need at least one full symbol");
    cplx acc{0.0, 0.0};
    for (int s = 0; s < n_full; ++s) {
        const std::size_t off = static_cast<std::size_t>(s) * slen;
        for (int i = 0; i < cfg.cp_len; ++i)
            acc += std::conj(y[off + i]) * y[off + i + cfg.n_subcarriers];
    }
    if (std::abs(acc) == 0.0) throw std::invalid_argument("cpbe_estimate: zero-energy input");
    return std::arg(acc) / (2.0 * M_PI);
}

double psa_estimate(const QamSymbolVector& y1, const QamSymbolVector& y2, const PilotSpec& pilots,
                    const OfdmConfig& cfg) {
    if (pilots.subcarriers.empty()) throw std::invalid_argument("psa_estimate: empty pilot set");
    cplx acc{0.0, 0.0};
    for (int k : pilots.subcarriers) {
        if (k < 0 || k >= static_cast<int>(y1.size()) || k >= static_cast<int>(y2.size()))
            throw std::invalid_argument("psa_estimate: pilot index out of range");
        acc += y2[k] * std::conj(y1[k]);
    }
    if (std::abs(acc) == 0.0) throw std::invalid_argument("psa_estimate: zero-energy pilots");
    return std::arg(acc) * cfg.n_subcarriers / (2.0 * M_PI * cfg.symbol_len());
}

double moose_range() { return 1.0; }
double cpbe_range() { return 0.5; }
double psa_range(const OfdmConfig& cfg) {
    return cfg.n_subcarriers / (2.0 * static_cast<double>(cfg.symbol_len()));
}
double fine_range(const OfdmConfig& cfg) {
    return cfg.preamble.ratio(cfg.n_subcarriers) / 2.0;
}

} // namespace isac
