#pragma once

#include <vector>

#include "covertlink/complex_buffer.hpp"
#include "covertlink/rng.hpp"

namespace covertlink::chan {

/// One draw of the impairments a packet sees: causal multipath taps, a
/// constant carrier frequency offset integrated into the phase ramp
/// e^{j(omega k + phi)}, an integer timing offset, and the AWGN level.
struct ChannelRealization {
    std::vector<cdouble> taps = {cdouble(1.0, 0.0)};
    double cfo_omega = 0.0;        // rad/sample
    double cfo_phi = 0.0;          // rad
    int timing_offset = 0;         // leading zeros prepended
    double noise_power_db = -1e9;  // relative to unit signal; <= -300 means none

    static ChannelRealization identity() { return {}; }

    /// Exponentially decaying taps (decay_db per tap) with random phases,
    /// normalized to unit energy.
    static ChannelRealization random_multipath(int n_taps, double decay_db, Rng& rng);
};

/// r = Lambda_Theta H s + n: convolve with the taps (full length), apply the
/// phase ramp, delay, then add circularly-symmetric Gaussian noise. Applied
/// in exactly that order.
ComplexBuffer apply_channel(const ComplexBuffer& s, const ChannelRealization& ch, Rng& rng);

/// Add noise scaled so the measured SNR over the buffer extent equals
/// snr_db. Infinite snr returns the input unchanged.
ComplexBuffer awgn_for_snr(const ComplexBuffer& s, double snr_db, Rng& rng);

/// Noise of the given per-sample power (linear), appended to nothing --
/// utility for padding regions.
void add_noise(std::vector<cdouble>& x, std::size_t begin, std::size_t end, double power,
               Rng& rng);

}  // namespace covertlink::chan
