#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace covertlink {

using cdouble = std::complex<double>;

/// A contiguous block of complex baseband samples tagged with its sample rate.
/// This is the currency every DSP stage trades in.
struct ComplexBuffer {
    std::vector<cdouble> samples;
    double sample_rate_hz = 20e6;

    ComplexBuffer() = default;
    ComplexBuffer(std::vector<cdouble> s, double rate)
        : samples(std::move(s)), sample_rate_hz(rate) {
        if (rate <= 0.0) throw std::invalid_argument("sample_rate_hz must be > 0");
    }
    explicit ComplexBuffer(std::size_t n, double rate = 20e6)
        : samples(n), sample_rate_hz(rate) {
        if (rate <= 0.0) throw std::invalid_argument("sample_rate_hz must be > 0");
    }

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    cdouble& operator[](std::size_t i) { return samples[i]; }
    const cdouble& operator[](std::size_t i) const { return samples[i]; }

    double duration_s() const { return static_cast<double>(samples.size()) / sample_rate_hz; }

    /// Mean |x|^2 over the buffer (linear, not dB). Empty buffer -> 0.
    double mean_power() const {
        if (samples.empty()) return 0.0;
        double acc = 0.0;
        for (const auto& s : samples) acc += std::norm(s);
        return acc / static_cast<double>(samples.size());
    }

    /// Mean |x|^2 over [begin, begin+len) clipped to the buffer extent.
    double mean_power(std::size_t begin, std::size_t len) const {
        if (begin >= samples.size() || len == 0) return 0.0;
        std::size_t end = begin + len;
        if (end > samples.size()) end = samples.size();
        double acc = 0.0;
        for (std::size_t i = begin; i < end; ++i) acc += std::norm(samples[i]);
        return acc / static_cast<double>(end - begin);
    }
};

}  // namespace covertlink
