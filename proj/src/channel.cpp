#include "covertlink/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace covertlink::chan {

ChannelRealization ChannelRealization::random_multipath(int n_taps, double decay_db, Rng& rng) {
    if (n_taps < 1) throw std::invalid_argument("random_multipath: need >= 1 tap");
    ChannelRealization ch;
    ch.taps.resize(n_taps);
    double energy = 0.0;
    for (int i = 0; i < n_taps; ++i) {
        const double mag = std::pow(10.0, -decay_db * i / 20.0);
        const double phase = (i == 0) ? 0.0 : rng.uniform(0.0, 2.0 * std::numbers::pi);
        ch.taps[i] = std::polar(mag, phase);
        energy += mag * mag;
    }
    const double norm = 1.0 / std::sqrt(energy);
    for (auto& t : ch.taps) t *= norm;
    return ch;
}

ComplexBuffer apply_channel(const ComplexBuffer& s, const ChannelRealization& ch, Rng& rng) {
    if (s.empty()) throw std::invalid_argument("apply_channel: empty input");
    if (ch.taps.empty() || ch.taps[0] == cdouble(0.0, 0.0))
        throw std::invalid_argument("apply_channel: taps must be nonempty with tap 0 != 0");

    const std::size_t nt = ch.taps.size();
    const std::size_t n = s.size() + nt - 1;
    ComplexBuffer out(static_cast<std::size_t>(ch.timing_offset) + n, s.sample_rate_hz);

    // multipath (full convolution)
    for (std::size_t k = 0; k < n; ++k) {
        cdouble acc(0.0, 0.0);
        const std::size_t t_lo = k >= s.size() ? k - s.size() + 1 : 0;
        const std::size_t t_hi = std::min(nt - 1, k);
        for (std::size_t t = t_lo; t <= t_hi; ++t) acc += ch.taps[t] * s.samples[k - t];
        out.samples[ch.timing_offset + k] = acc;
    }
    // phase ramp indexed from the convolution output origin
    if (ch.cfo_omega != 0.0 || ch.cfo_phi != 0.0) {
        for (std::size_t k = 0; k < n; ++k)
            out.samples[ch.timing_offset + k] *=
                std::polar(1.0, ch.cfo_omega * static_cast<double>(k) + ch.cfo_phi);
    }
    // noise over the whole output extent
    if (ch.noise_power_db > -300.0) {
        const double sigma = std::sqrt(std::pow(10.0, ch.noise_power_db / 10.0) / 2.0);
        for (auto& v : out.samples) v += cdouble(sigma * rng.gauss(), sigma * rng.gauss());
    }
    return out;
}

ComplexBuffer awgn_for_snr(const ComplexBuffer& s, double snr_db, Rng& rng) {
    if (s.empty()) throw std::invalid_argument("awgn_for_snr: empty input");
    if (std::isinf(snr_db) && snr_db > 0) return s;
    const double p = s.mean_power();
    if (p <= 0.0) throw std::invalid_argument("awgn_for_snr: zero-power input");
    const double noise_power = p * std::pow(10.0, -snr_db / 10.0);
    const double sigma = std::sqrt(noise_power / 2.0);
    ComplexBuffer out = s;
    for (auto& v : out.samples) v += cdouble(sigma * rng.gauss(), sigma * rng.gauss());
    return out;
}

void add_noise(std::vector<cdouble>& x, std::size_t begin, std::size_t end, double power,
               Rng& rng) {
    const double sigma = std::sqrt(power / 2.0);
    for (std::size_t i = begin; i < end && i < x.size(); ++i)
        x[i] += cdouble(sigma * rng.gauss(), sigma * rng.gauss());
}

}  // namespace covertlink::chan
