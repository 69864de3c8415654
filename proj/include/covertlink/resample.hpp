#pragma once

#include "covertlink/complex_buffer.hpp"

namespace covertlink {

/// Rational-ratio resampler (zero-stuff, Kaiser lowpass, decimate), with the
/// filter group delay compensated so input sample k maps to output k*L/M.
/// The ratio target/source must reduce to L/M with L, M <= 64.
/// Passband is flat within ~0.01 dB up to 81.25% of the narrower Nyquist;
/// stopband rejection > 60 dB.
ComplexBuffer resample(const ComplexBuffer& x, double target_rate_hz);

/// The filter taps used for a given L/M pair (exposed for tests).
std::vector<double> resample_filter_taps(unsigned up, unsigned down);

}  // namespace covertlink
