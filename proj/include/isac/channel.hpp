#ifndef ISAC_CHANNEL_HPP
#define ISAC_CHANNEL_HPP

#include <vector>

#include "isac/core.hpp"

namespace isac {

/// One propagation path. Path 0 is the LOS path.
struct PathSpec {
    cplx gain{1.0, 0.0};   // complex fading coefficient
    int delay = 0;         // integer samples
    double aoa = 0.0;      // radians in [-pi/2, pi/2]
    double aod = 0.0;      // radians in [-pi/2, pi/2]
    bool is_los = true;
};

/// V2V propagation model: multipath with ULA steering on both ends, one
/// common Doppler rotation, AWGN at the receiver. Element spacing is half a
/// wavelength. n_subcarriers anchors the normalized Doppler to a per-sample
/// phase increment of 2 pi eps / N.
struct ChannelConfig {
    std::vector<PathSpec> paths{PathSpec{}};
    double doppler_normalized = 0.0; // eps = f_d / delta_f
    int n_antennas = 1;              // P on each end
    int n_subcarriers = 128;
    double sample_period_s = 1.0 / (128 * 15e3);
    double wavelength_m = 299792458.0 / 28e9;
};

/// Unit-norm combining weights on both ends.
struct BeamWeights {
    std::vector<cplx> rx; // c
    std::vector<cplx> tx; // b
};

/// Received signal before combining: one buffer per (rx, tx) antenna pair,
/// so the beam assignment c^H Y b can be applied afterwards.
struct MultiAntennaSignal {
    int n_rx = 1;
    int n_tx = 1;
    std::vector<IQBuffer> entries; // rx-major

    IQBuffer& at(int p, int q) { return entries[static_cast<std::size_t>(p) * n_tx + q]; }
    const IQBuffer& at(int p, int q) const {
        return entries[static_cast<std::size_t>(p) * n_tx + q];
    }
};

/// ULA steering vector, element p = (1/sqrt(P)) exp(-j pi p sin(theta)).
std::vector<cplx> steering_vector(double theta, int n_antennas);

/// Matched weights for the LOS angles (ideal beam alignment).
BeamWeights matched_weights(const ChannelConfig& ch);

/// Multipath + Doppler + AWGN. Each path contributes
/// gain * e^{j2pi eps n/N} * a_r(aoa) a_t^H(aod) * x(n - delay); noise of
/// variance noise_var is added independently per antenna pair.
MultiAntennaSignal apply_channel(const IQBuffer& x, const ChannelConfig& ch, RngStream& rng,
                                 double noise_var);

/// Q(n) = c^H Y(n) b. With matched weights on a single LOS path this reduces
/// to the scalar LOS channel output.
IQBuffer beamform(const MultiAntennaSignal& y, const BeamWeights& w);

/// Multiplies sample n by e^{j2pi eps n/N}.
IQBuffer apply_cfo(const IQBuffer& x, double eps, int n_subcarriers);

/// Noise variance is mean|x|^2 / linear(snr_db); +inf passes x through.
IQBuffer add_awgn(const IQBuffer& x, double snr_db, RngStream& rng);

} // namespace isac

#endif
