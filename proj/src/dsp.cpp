#include "covertlink/dsp.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace covertlink {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

void fft(std::vector<cdouble>& x, bool inverse) {
    const std::size_t n = x.size();
    if (!is_pow2(n)) throw std::invalid_argument("fft: length must be a power of two");

    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }

    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const cdouble wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cdouble w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cdouble u = x[i + k];
                const cdouble v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& v : x) v *= inv;
    }
}

std::vector<cdouble> fft_of(const std::vector<cdouble>& x) {
    auto y = x;
    fft(y, false);
    return y;
}

std::vector<cdouble> ifft_of(const std::vector<cdouble>& x) {
    auto y = x;
    fft(y, true);
    return y;
}

std::vector<cdouble> xcorr(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("xcorr: empty input");
    const std::ptrdiff_t na = static_cast<std::ptrdiff_t>(a.size());
    const std::ptrdiff_t nb = static_cast<std::ptrdiff_t>(b.size());
    std::vector<cdouble> out(na + nb - 1, cdouble(0.0, 0.0));
    for (std::ptrdiff_t lag = -(nb - 1); lag < na; ++lag) {
        cdouble acc(0.0, 0.0);
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, -lag);
        const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(nb, na - lag);
        for (std::ptrdiff_t n = lo; n < hi; ++n) acc += a[n + lag] * std::conj(b[n]);
        out[lag + nb - 1] = acc;
    }
    return out;
}

double power_to_db(double p) {
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(p);
}

double measure_power_db(const ComplexBuffer& x) {
    if (x.empty()) throw std::invalid_argument("measure_power_db: empty buffer");
    return power_to_db(x.mean_power());
}

std::vector<double> psd_estimate(const ComplexBuffer& x, std::size_t nfft, double overlap) {
    if (!is_pow2(nfft)) throw std::invalid_argument("psd_estimate: nfft must be a power of two");
    if (x.size() < nfft) throw std::invalid_argument("psd_estimate: buffer shorter than nfft");
    if (overlap < 0.0 || overlap >= 1.0) throw std::invalid_argument("psd_estimate: overlap in [0,1)");

    // Hann window, held fixed for regression stability.
    std::vector<double> w(nfft);
    double wnorm = 0.0;
    for (std::size_t i = 0; i < nfft; ++i) {
        w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                     static_cast<double>(nfft)));
        wnorm += w[i] * w[i];
    }
    wnorm /= static_cast<double>(nfft);  // mean(w^2)

    std::size_t hop = static_cast<std::size_t>(std::lround((1.0 - overlap) * static_cast<double>(nfft)));
    if (hop == 0) hop = 1;

    std::vector<double> acc(nfft, 0.0);
    std::vector<cdouble> seg(nfft);
    std::size_t count = 0;
    for (std::size_t start = 0; start + nfft <= x.size(); start += hop) {
        for (std::size_t i = 0; i < nfft; ++i) seg[i] = x.samples[start + i] * w[i];
        fft(seg, false);
        for (std::size_t i = 0; i < nfft; ++i) acc[i] += std::norm(seg[i]);
        ++count;
    }

    // Normalize so the linear bins sum to mean |x|^2.
    const double scale = 1.0 / (static_cast<double>(count) * static_cast<double>(nfft) *
                                static_cast<double>(nfft) * wnorm);
    std::vector<double> out(nfft);
    for (std::size_t i = 0; i < nfft; ++i) {
        // DC-centered ordering: out[0] = -fs/2.
        const std::size_t src = (i + nfft / 2) % nfft;
        out[i] = power_to_db(acc[src] * scale);
    }
    return out;
}

std::vector<double> psd_frequencies(double sample_rate_hz, std::size_t nfft) {
    std::vector<double> f(nfft);
    const double df = sample_rate_hz / static_cast<double>(nfft);
    for (std::size_t i = 0; i < nfft; ++i)
        f[i] = (static_cast<double>(i) - static_cast<double>(nfft / 2)) * df;
    return f;
}

}  // namespace covertlink
