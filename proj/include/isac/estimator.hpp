#ifndef ISAC_ESTIMATOR_HPP
#define ISAC_ESTIMATOR_HPP

#include <optional>
#include <vector>

#include "isac/core.hpp"
#include "isac/ofdm.hpp"
#include "isac/radar.hpp"

namespace isac {

/// Block correlations of the received preamble window.
/// phi(m) correlates block pairs at lag m*L with the conjugate on the later
/// block, so arg phi(m) = -2 pi eps m / r for a residual DFS eps.
struct CorrelationSet {
    cplx phi1{0.0, 0.0};
    cplx phi2{0.0, 0.0};
    double gamma = 0.0; // received energy over the three blocks
    double rho = 0.0;   // sigma_s^2 / (sigma_s^2 + sigma_n^2)
};

/// Constant-modulus pseudo-random base block, unit average power,
/// regenerated deterministically from spec.base_seed.
std::vector<cplx> preamble_base(const PreambleSpec& spec);

/// Preamble symbol body: [base | base | base | zero pad], length N.
std::vector<cplx> preamble_body(const PreambleSpec& spec, int n_subcarriers);

/// Full preamble OFDM symbol with the cyclic prefix copied from the tail.
OfdmSymbol generate_preamble(const PreambleSpec& spec, const OfdmConfig& cfg);

/// Multiplies sample n by e^{-j2pi eps n/N}; exact inverse of apply_cfo.
IQBuffer compensate(const IQBuffer& x, double eps, int n_subcarriers);

/// Block correlations over a window holding the three repeated blocks.
/// rho comes from snr_linear when given, else from the (|phi1|+|phi2|)/gamma
/// plug-in. The correlations themselves never depend on rho.
CorrelationSet correlate(const IQBuffer& window, int block_len,
                         std::optional<double> snr_linear = std::nullopt);

/// Closed-form ML fine estimate,
///   eps_f = -(r/2pi) (|phi1| arg phi1 + 2 |phi2| arg phi2)
///           / (|phi1| + 4 |phi2|),
/// with arg phi2 unwrapped onto the branch implied by arg phi1 so the
/// expression holds over the full unambiguous range |eps_f| < r/2. Values
/// beyond the range alias and are reported wrapped.
double fine_estimate(const CorrelationSet& c, double ratio);

/// eps_hat = eps_coarse + eps_fine.
double total_estimate(double eps_coarse, double eps_fine);

/// Log-likelihood (up to constants) of the window at candidate eps_f:
///   Lambda = 2 sum_m Re{ e^{j2pi eps_f m/r} phi(m) } - 2 rho gamma.
/// Grid-searching this is the brute-force oracle for fine_estimate.
double log_likelihood(const CorrelationSet& c, double eps_f, double ratio);
double log_likelihood(const IQBuffer& window, double eps_f, int block_len, double ratio,
                      std::optional<double> snr_linear = std::nullopt);

/// Cramer-Rao bound for the preamble estimator: 3 / (2 pi^2 L SNR).
double crlb(int block_len, double snr_linear);

/// Coarse stage on a received frame: radar grid over the burst symbols that
/// follow the preamble, Doppler profile, peak pick.
double coarse_from_frame(const IQBuffer& frame_rx,
                         const std::vector<QamSymbolVector>& tx_data,
                         const OfdmConfig& cfg, GridMode mode = GridMode::KnownData);

/// Fine stage on a received frame: compensate by eps_coarse, correlate the
/// preamble body, closed-form estimate. The reported value is placed on the
/// alias branch that keeps eps_coarse + eps_fine inside the design range
/// (-r/2, r/2]; the sum is invariant to which coarse bin was picked.
double fine_from_frame(const IQBuffer& frame_rx, const OfdmConfig& cfg, double eps_coarse);

/// Full two-stage pipeline. Coarse always runs; the fine stage runs only in
/// CoarseAndFine mode. Trial metadata fields of the record are left for the
/// caller.
EstimateRecord estimate_pipeline(const IQBuffer& frame_rx,
                                 const std::vector<QamSymbolVector>& tx_data,
                                 const OfdmConfig& cfg, CompensationMode mode);

} // namespace isac

#endif
