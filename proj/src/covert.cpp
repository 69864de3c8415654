#include "covertlink/covert.hpp"

#include <cmath>
#include <stdexcept>

namespace covertlink::covert {

CovertFrame covert_modulate(const std::vector<std::uint8_t>& bits, const CovertConfig& cfg) {
    if (bits.empty()) throw std::invalid_argument("covert_modulate: no bits");
    CovertFrame f;
    f.bits = bits;
    const int sps = cfg.samples_per_symbol();
    f.waveform.sample_rate_hz = cfg.chip_rate_hz * cfg.samples_per_chip;
    f.waveform.samples.resize(bits.size() * static_cast<std::size_t>(sps));
    std::size_t w = 0;
    for (auto b : bits) {
        const double sym = b ? -1.0 : 1.0;
        for (int chip : cfg.code.chips) {
            const double v = sym * chip;
            for (int s = 0; s < cfg.samples_per_chip; ++s)
                f.waveform.samples[w++] = cdouble(v, 0.0);
        }
    }
    return f;
}

int capacity(double duration_s, const CovertConfig& cfg) {
    if (duration_s <= 0.0) throw std::invalid_argument("capacity: duration must be > 0");
    return static_cast<int>(std::floor(duration_s / cfg.symbol_duration_s() + 1e-9));
}

int capacity_for_packet(std::size_t n_samples, const CovertConfig& cfg) {
    const std::ptrdiff_t usable =
        static_cast<std::ptrdiff_t>(n_samples) - cfg.start_offset;
    if (usable <= 0) return 0;
    return static_cast<int>(usable / cfg.samples_per_symbol());
}

double inject(ComplexBuffer& host, const CovertFrame& frame, double sir_db,
              std::size_t host_offset) {
    if (std::isinf(sir_db) && sir_db > 0) return 0.0;
    const std::size_t n = frame.waveform.size();
    if (host_offset + n > host.size())
        throw std::invalid_argument("inject: frame does not fit inside the host buffer");
    const double p_host = host.mean_power(host_offset, n);
    if (p_host <= 0.0) throw std::invalid_argument("inject: zero-power host window");
    const double p_frame = frame.waveform.mean_power();
    const double amp = std::sqrt(p_host * std::pow(10.0, -sir_db / 10.0) / p_frame);
    for (std::size_t i = 0; i < n; ++i)
        host.samples[host_offset + i] += amp * frame.waveform.samples[i];
    return amp;
}

DespreadResult covert_demodulate(const ComplexBuffer& x, const CovertConfig& cfg, int n_bits,
                                 std::size_t offset) {
    const int sps = cfg.samples_per_symbol();
    if (offset + static_cast<std::size_t>(n_bits) * sps > x.size())
        throw std::invalid_argument("covert_demodulate: buffer too short for n_bits");

    DespreadResult out;
    out.bits.resize(n_bits);
    out.soft.resize(n_bits);
    out.chip_soft.reserve(static_cast<std::size_t>(n_bits) * cfg.code.length());

    std::size_t p = offset;
    for (int b = 0; b < n_bits; ++b) {
        cdouble corr(0.0, 0.0);
        for (int chip : cfg.code.chips) {
            cdouble c(0.0, 0.0);
            for (int s = 0; s < cfg.samples_per_chip; ++s) c += x.samples[p++];
            out.chip_soft.push_back(c);
            corr += c * static_cast<double>(chip);
        }
        out.soft[b] = corr;
        out.bits[b] = corr.real() < 0.0 ? 1 : 0;
    }
    return out;
}

}  // namespace covertlink::covert
