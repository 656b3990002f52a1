#ifndef ISAC_DSP_HPP
#define ISAC_DSP_HPP

#include <vector>

#include "isac/core.hpp"

namespace isac::dsp {

/// In-place iterative radix-2 transform, no output scaling.
/// inverse=false: X(k) = sum_n x(n) e^{-j2pi kn/N}
/// inverse=true:  x(n) = sum_k X(k) e^{+j2pi nk/N}
/// Length must be a power of two.
void fft_inplace(std::vector<cplx>& buf, bool inverse);

/// Direct O(n^2) transform with the same conventions; any length.
std::vector<cplx> dft(const std::vector<cplx>& x, bool inverse);

/// Forward transform, dispatching to the radix-2 path for power-of-two
/// lengths and the direct path otherwise.
std::vector<cplx> transform(const std::vector<cplx>& x, bool inverse);

} // namespace isac::dsp

#endif
