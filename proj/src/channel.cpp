#include "isac/channel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace isac {

std::vector<cplx> steering_vector(double theta, int n_antennas) {
    if (n_antennas < 1) throw std::invalid_argument("steering_vector: P must be >= 1");
    if (theta < -M_PI / 2 || theta > M_PI / 2)
        throw std::invalid_argument("steering_vector: angle out of [-pi/2, pi/2]");
    const double norm = 1.0 / std::sqrt(static_cast<double>(n_antennas));
    std::vector<cplx> a(n_antennas);
    for (int p = 0; p < n_antennas; ++p) {
        // spacing = lambda/2 makes the phase -2pi p (lambda/2) sin(theta)/lambda
        const double phase = -M_PI * p * std::sin(theta);
        a[p] = norm * cplx(std::cos(phase), std::sin(phase));
    }
    return a;
}

BeamWeights matched_weights(const ChannelConfig& ch) {
    if (ch.paths.empty()) throw std::invalid_argument("matched_weights: channel has no paths");
    BeamWeights w;
    w.rx = steering_vector(ch.paths.front().aoa, ch.n_antennas);
    w.tx = steering_vector(ch.paths.front().aod, ch.n_antennas);
    return w;
}

MultiAntennaSignal apply_channel(const IQBuffer& x, const ChannelConfig& ch, RngStream& rng,
                                 double noise_var) {
    if (ch.paths.empty()) throw std::invalid_argument("apply_channel: channel has no paths");
    const std::size_t len = x.size();
    for (const auto& path : ch.paths) {
        if (path.delay < 0 || static_cast<std::size_t>(path.delay) >= len)
            throw std::invalid_argument("apply_channel: path delay exceeds buffer length");
    }

    const int P = ch.n_antennas;
    MultiAntennaSignal out;
    out.n_rx = P;
    out.n_tx = P;
    out.entries.assign(static_cast<std::size_t>(P) * P, IQBuffer{});
    for (auto& e : out.entries) {
        e.sample_rate_hz = x.sample_rate_hz;
        e.samples.assign(len, cplx{0.0, 0.0});
    }

    const double step = 2.0 * M_PI * ch.doppler_normalized / ch.n_subcarriers;
    std::vector<cplx> rot(len);
    for (std::size_t n = 0; n < len; ++n)
        rot[n] = cplx(std::cos(step * static_cast<double>(n)), std::sin(step * static_cast<double>(n)));

    for (const auto& path : ch.paths) {
        const auto ar = steering_vector(path.aoa, P);
        const auto at = steering_vector(path.aod, P);
        for (int p = 0; p < P; ++p) {
            for (int q = 0; q < P; ++q) {
                const cplx coupling = path.gain * ar[p] * std::conj(at[q]);
                auto& dst = out.at(p, q).samples;
                for (std::size_t n = static_cast<std::size_t>(path.delay); n < len; ++n)
                    dst[n] += coupling * rot[n] * x[n - path.delay];
            }
        }
    }

    if (noise_var > 0.0) {
        for (auto& e : out.entries)
            for (auto& s : e.samples) s += rng.complex_gaussian(noise_var);
    }
    return out;
}

IQBuffer beamform(const MultiAntennaSignal& y, const BeamWeights& w) {
    if (static_cast<int>(w.rx.size()) != y.n_rx || static_cast<int>(w.tx.size()) != y.n_tx)
        throw std::invalid_argument("beamform: weight dimensions do not match antenna counts");
    if (y.entries.empty()) throw std::invalid_argument("beamform: empty signal");

    const std::size_t len = y.entries.front().size();
    IQBuffer out;
    out.sample_rate_hz = y.entries.front().sample_rate_hz;
    out.samples.assign(len, cplx{0.0, 0.0});
    for (int p = 0; p < y.n_rx; ++p) {
        for (int q = 0; q < y.n_tx; ++q) {
            const cplx coeff = std::conj(w.rx[p]) * w.tx[q];
            const auto& src = y.at(p, q).samples;
            for (std::size_t n = 0; n < len; ++n) out.samples[n] += coeff * src[n];
        }
    }
    return out;
}

IQBuffer apply_cfo(const IQBuffer& x, double eps, int n_subcarriers) {
    IQBuffer out = x;
    const double step = 2.0 * M_PI * eps / n_subcarriers;
    for (std::size_t n = 0; n < out.size(); ++n) {
        const double phase = step * static_cast<double>(n);
        out.samples[n] *= cplx(std::cos(phase), std::sin(phase));
    }
    return out;
}

IQBuffer add_awgn(const IQBuffer& x, double snr_db, RngStream& rng) {
    if (std::isinf(snr_db) && snr_db > 0) return x;
    double power = 0.0;
    for (const auto& s : x.samples) power += std::norm(s);
    if (x.size() == 0 || power == 0.0)
        throw std::invalid_argument("add_awgn: input signal has zero energy");
    power /= static_cast<double>(x.size());

    const double noise_var = power / db_to_linear(snr_db);
    IQBuffer out = x;
    for (auto& s : out.samples) s += rng.complex_gaussian(noise_var);
    return out;
}

} // namespace isac
