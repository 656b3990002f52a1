#include "isac/estimator.hpp"

#include <cmath>
#include <stdexcept>

namespace isac {

namespace {

double wrap_to_half_range(double x, double period) {
    return x - period * std::round(x / period);
}

} // namespace

std::vector<cplx> preamble_base(const PreambleSpec& spec) {
    if (spec.block_len <= 0) throw std::invalid_argument("preamble: block_len must be > 0");
    RngStream rng(spec.base_seed, 0);
    std::vector<cplx> base(spec.block_len);
    for (auto& v : base) {
        const double phase = rng.uniform(0.0, 2.0 * M_PI);
        v = cplx(std::cos(phase), std::sin(phase));
    }
    return base;
}

std::vector<cplx> preamble_body(const PreambleSpec& spec, int n_subcarriers) {
    if (spec.repetitions * spec.block_len > n_subcarriers)
        throw std::invalid_argument("preamble: 3*block_len must be <= N");
    const auto base = preamble_base(spec);
    std::vector<cplx> body(n_subcarriers, cplx{0.0, 0.0});
    for (int rep = 0; rep < spec.repetitions; ++rep)
        for (int i = 0; i < spec.block_len; ++i) body[rep * spec.block_len + i] = base[i];
    return body;
}

OfdmSymbol generate_preamble(const PreambleSpec& spec, const OfdmConfig& cfg) {
    const auto body = preamble_body(spec, cfg.n_subcarriers);
    OfdmSymbol sym;
    sym.has_cp = true;
    sym.time_samples.sample_rate_hz = cfg.sample_rate_hz();
    auto& t = sym.time_samples.samples;
    t.resize(cfg.n_subcarriers + cfg.cp_len);
    for (int i = 0; i < cfg.cp_len; ++i) t[i] = body[cfg.n_subcarriers - cfg.cp_len + i];
    for (int i = 0; i < cfg.n_subcarriers; ++i) t[cfg.cp_len + i] = body[i];
    return sym;
}

IQBuffer compensate(const IQBuffer& x, double eps, int n_subcarriers) {
    IQBuffer out = x;
    const double step = -2.0 * M_PI * eps / n_subcarriers;
    for (std::size_t n = 0; n < out.size(); ++n) {
        const double phase = step * static_cast<double>(n);
        out.samples[n] *= cplx(std::cos(phase), std::sin(phase));
    }
    return out;
}

CorrelationSet correlate(const IQBuffer& window, int block_len,
                         std::optional<double> snr_linear) {
    const int l = block_len;
    if (l <= 0) throw std::invalid_argument("correlate: block_len must be > 0");
    if (window.size() < static_cast<std::size_t>(3 * l))
        throw std::invalid_argument("correlate: window shorter than three blocks");

    CorrelationSet c;
    for (int m = 1; m <= 2; ++m) {
        cplx acc{0.0, 0.0};
        for (int i = 0; i <= 2 - m; ++i)
            for (int n = 0; n < l; ++n)
                acc += window[n + i * l] * std::conj(window[n + (i + m) * l]);
        (m == 1 ? c.phi1 : c.phi2) = acc;
    }
    for (int i = 0; i < 3; ++i)
        for (int n = 0; n < l; ++n) c.gamma += std::norm(window[n + i * l]);

    if (snr_linear) {
        c.rho = *snr_linear / (1.0 + *snr_linear);
    } else if (c.gamma > 0.0) {
        // plug-in: |phi1| ~ 2L sigma_s^2, |phi2| ~ L sigma_s^2,
        // gamma ~ 3L (sigma_s^2 + sigma_n^2)
        c.rho = std::min(1.0, (std::abs(c.phi1) + std::abs(c.phi2)) / c.gamma);
    }
    return c;
}

double fine_estimate(const CorrelationSet& c, double ratio) {
    const double a1 = std::abs(c.phi1);
    const double a2 = std::abs(c.phi2);
    if (a1 + 4.0 * a2 <= 0.0)
        throw std::invalid_argument("fine_estimate: degenerate correlations, no estimate");

    const double th1 = std::arg(c.phi1);
    double th2 = std::arg(c.phi2);
    // Place arg phi2 on the branch consistent with 2*arg phi1; without this
    // the closed form loses the range (r/4, r/2).
    th2 += 2.0 * M_PI * std::round((2.0 * th1 - th2) / (2.0 * M_PI));

    return -(ratio / (2.0 * M_PI)) * (a1 * th1 + 2.0 * a2 * th2) / (a1 + 4.0 * a2);
}

double total_estimate(double eps_coarse, double eps_fine) { return eps_coarse + eps_fine; }

double log_likelihood(const CorrelationSet& c, double eps_f, double ratio) {
    double acc = 0.0;
    const double w = 2.0 * M_PI * eps_f / ratio;
    acc += std::real(cplx(std::cos(w), std::sin(w)) * c.phi1);
    acc += std::real(cplx(std::cos(2.0 * w), std::sin(2.0 * w)) * c.phi2);
    return 2.0 * acc - 2.0 * c.rho * c.gamma;
}

double log_likelihood(const IQBuffer& window, double eps_f, int block_len, double ratio,
                      std::optional<double> snr_linear) {
    return log_likelihood(correlate(window, block_len, snr_linear), eps_f, ratio);
}

double crlb(int block_len, double snr_linear) {
    if (block_len < 1) throw std::invalid_argument("crlb: block_len must be >= 1");
    if (snr_linear <= 0.0) throw std::invalid_argument("crlb: snr must be > 0");
    return 3.0 / (2.0 * M_PI * M_PI * block_len * snr_linear);
}

double coarse_from_frame(const IQBuffer& frame_rx,
                         const std::vector<QamSymbolVector>& tx_data,
                         const OfdmConfig& cfg, GridMode mode) {
    const int slen = cfg.symbol_len();
    if (frame_rx.size() < static_cast<std::size_t>(slen) * (1 + tx_data.size()))
        throw std::invalid_argument("coarse_from_frame: frame shorter than preamble + burst");

    // The burst starts after the preamble symbol. The constant phase offset
    // this skip introduces is common to every grid entry.
    IQBuffer burst;
    burst.sample_rate_hz = frame_rx.sample_rate_hz;
    burst.samples.assign(frame_rx.samples.begin() + slen, frame_rx.samples.end());
    return coarse_estimate(doppler_profile(build_symbol_grid(burst, tx_data, cfg, mode)));
}

double fine_from_frame(const IQBuffer& frame_rx, const OfdmConfig& cfg, double eps_coarse) {
    const int l = cfg.preamble.block_len;
    const double r = cfg.preamble.ratio(cfg.n_subcarriers);
    if (frame_rx.size() < static_cast<std::size_t>(cfg.cp_len + 3 * l))
        throw std::invalid_argument("fine_from_frame: frame shorter than the preamble body");

    const IQBuffer comp = compensate(frame_rx, eps_coarse, cfg.n_subcarriers);
    IQBuffer window;
    window.sample_rate_hz = comp.sample_rate_hz;
    window.samples.assign(comp.samples.begin() + cfg.cp_len,
                          comp.samples.begin() + cfg.cp_len + 3 * l);
    const double raw = fine_estimate(correlate(window, l), r);

    // The fine phase is only defined modulo r; report the branch that keeps
    // the combined estimate inside (-r/2, r/2]. The sum eps_coarse + fine is
    // invariant (mod r) to whichever alias the coarse stage landed on.
    return wrap_to_half_range(eps_coarse + raw, r) - eps_coarse;
}

EstimateRecord estimate_pipeline(const IQBuffer& frame_rx,
                                 const std::vector<QamSymbolVector>& tx_data,
                                 const OfdmConfig& cfg, CompensationMode mode) {
    EstimateRecord rec;
    rec.mode = mode;
    rec.eps_coarse = coarse_from_frame(frame_rx, tx_data, cfg);
    rec.eps_fine =
        mode == CompensationMode::CoarseAndFine ? fine_from_frame(frame_rx, cfg, rec.eps_coarse) : 0.0;
    rec.eps_total = total_estimate(rec.eps_coarse, rec.eps_fine);
    return rec;
}

} // namespace isac
