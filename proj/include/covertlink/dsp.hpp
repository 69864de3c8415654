#pragma once

#include <vector>

#include "covertlink/complex_buffer.hpp"

namespace covertlink {

/// In-place radix-2 FFT, forward = sum x[n] e^{-j2pi nk/N}, no scaling.
/// N must be a power of two.
void fft(std::vector<cdouble>& x, bool inverse = false);

/// Out-of-place helpers.
std::vector<cdouble> fft_of(const std::vector<cdouble>& x);
std::vector<cdouble> ifft_of(const std::vector<cdouble>& x);  // includes the 1/N

/// Full aperiodic cross-correlation:
///   out[lag + len(b) - 1] = sum_n a[n + lag] conj(b[n]),
/// lag from -(len(b)-1) to len(a)-1. xcorr(a, a) peaks at lag 0 with
/// value sum |a|^2. Throws on empty input.
std::vector<cdouble> xcorr(const std::vector<cdouble>& a, const std::vector<cdouble>& b);

/// 10*log10(mean |x|^2). All-zero (or empty) buffer returns -inf.
double measure_power_db(const ComplexBuffer& x);
double power_to_db(double p);

/// Averaged periodogram PSD (Hann window, 50% overlap), DC-centered bins,
/// in dB. Normalized so that 10*log10(sum of linear bins) tracks
/// measure_power_db within a fraction of a dB for stationary input.
/// nfft must be a power of two and <= length(x).
std::vector<double> psd_estimate(const ComplexBuffer& x, std::size_t nfft, double overlap = 0.5);

/// Bin center frequencies in Hz matching psd_estimate output (DC-centered).
std::vector<double> psd_frequencies(double sample_rate_hz, std::size_t nfft);

}  // namespace covertlink
