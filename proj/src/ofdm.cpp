#include "isac/ofdm.hpp"

#include <cmath>
#include <stdexcept>

#include "isac/dsp.hpp"

namespace isac {

namespace {

int bits_per_axis(int order) {
    switch (order) {
        case 4: return 1;
        case 16: return 2;
        case 64: return 3;
        default: throw std::invalid_argument("qam: unsupported modulation order");
    }
}

// Amplitude scale for unit average constellation energy:
// levels are the odd integers +-1..+-(2^b - 1) per axis.
double qam_scale(int b) {
    const int levels = 1 << b;
    return 1.0 / std::sqrt(2.0 * (levels * levels - 1) / 3.0);
}

int gray_to_index(int g) {
    int b = g;
    for (int shift = 1; shift < 8; shift <<= 1) b ^= b >> shift;
    return b;
}

int index_to_gray(int i) { return i ^ (i >> 1); }

} // namespace

QamSymbolVector qam_map(const std::vector<std::uint8_t>& bits, int order) {
    const int b = bits_per_axis(order);
    const int bps = 2 * b;
    if (bits.size() % bps != 0)
        throw std::invalid_argument("qam_map: bit count not divisible by bits per symbol");
    const double scale = qam_scale(b);
    const int offset = (1 << b) - 1;

    QamSymbolVector out;
    out.symbols.reserve(bits.size() / bps);
    for (std::size_t i = 0; i < bits.size(); i += bps) {
        int gi = 0, gq = 0;
        for (int k = 0; k < b; ++k) gi = (gi << 1) | (bits[i + k] & 1);
        for (int k = 0; k < b; ++k) gq = (gq << 1) | (bits[i + b + k] & 1);
        const double vi = (2 * gray_to_index(gi) - offset) * scale;
        const double vq = (2 * gray_to_index(gq) - offset) * scale;
        out.symbols.emplace_back(vi, vq);
    }
    return out;
}

std::vector<std::uint8_t> qam_demap(const QamSymbolVector& symbols, int order) {
    const int b = bits_per_axis(order);
    const double scale = qam_scale(b);
    const int nlevels = 1 << b;
    const int offset = nlevels - 1;

    std::vector<std::uint8_t> bits;
    bits.reserve(symbols.size() * 2 * b);
    auto slice = [&](double v) {
        int idx = static_cast<int>(std::lround((v / scale + offset) / 2.0));
        if (idx < 0) idx = 0;
        if (idx >= nlevels) idx = nlevels - 1;
        return index_to_gray(idx);
    };
    for (const cplx& s : symbols.symbols) {
        const int gi = slice(s.real());
        const int gq = slice(s.imag());
        for (int k = b - 1; k >= 0; --k) bits.push_back(static_cast<std::uint8_t>((gi >> k) & 1));
        for (int k = b - 1; k >= 0; --k) bits.push_back(static_cast<std::uint8_t>((gq >> k) & 1));
    }
    return bits;
}

double qam_peak_amplitude(int order) {
    const int b = bits_per_axis(order);
    const double peak_axis = ((1 << b) - 1) * qam_scale(b);
    return peak_axis * std::sqrt(2.0);
}

OfdmSymbol ofdm_modulate(const QamSymbolVector& freq, const OfdmConfig& cfg) {
    const int n = cfg.n_subcarriers;
    if (static_cast<int>(freq.size()) != n)
        throw std::invalid_argument("ofdm_modulate: expected N frequency symbols");

    std::vector<cplx> body = dsp::transform(freq.symbols, true);
    for (auto& v : body) v /= static_cast<double>(n);

    OfdmSymbol sym;
    sym.has_cp = true;
    sym.time_samples.sample_rate_hz = cfg.sample_rate_hz();
    auto& t = sym.time_samples.samples;
    t.resize(n + cfg.cp_len);
    for (int i = 0; i < cfg.cp_len; ++i) t[i] = body[n - cfg.cp_len + i];
    for (int i = 0; i < n; ++i) t[cfg.cp_len + i] = body[i];
    return sym;
}

QamSymbolVector ofdm_demodulate(const OfdmSymbol& sym, const OfdmConfig& cfg) {
    const int n = cfg.n_subcarriers;
    const int expect = n + (sym.has_cp ? cfg.cp_len : 0);
    if (static_cast<int>(sym.time_samples.size()) != expect)
        throw std::invalid_argument("ofdm_demodulate: symbol length mismatch");

    const int skip = sym.has_cp ? cfg.cp_len : 0;
    std::vector<cplx> body(sym.time_samples.samples.begin() + skip,
                           sym.time_samples.samples.end());
    QamSymbolVector out;
    out.symbols = dsp::transform(body, false);
    return out;
}

IQBuffer build_frame(const OfdmSymbol& preamble, const std::vector<OfdmSymbol>& data) {
    IQBuffer frame;
    frame.sample_rate_hz = preamble.time_samples.sample_rate_hz;
    std::size_t total = preamble.time_samples.size();
    for (const auto& d : data) total += d.time_samples.size();
    frame.samples.reserve(total);
    frame.samples.insert(frame.samples.end(), preamble.time_samples.samples.begin(),
                         preamble.time_samples.samples.end());
    for (const auto& d : data)
        frame.samples.insert(frame.samples.end(), d.time_samples.samples.begin(),
                             d.time_samples.samples.end());
    return frame;
}

} // namespace isac
