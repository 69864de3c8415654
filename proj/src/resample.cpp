#include "covertlink/resample.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace covertlink {

namespace {

double bessel_i0(double x) {
    // power series, converges fast for the beta range we use
    double sum = 1.0, term = 1.0;
    for (int k = 1; k < 50; ++k) {
        term *= (x / (2.0 * k)) * (x / (2.0 * k));
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

bool find_ratio(double ratio, unsigned& up, unsigned& down) {
    for (unsigned q = 1; q <= 64; ++q) {
        const double p = ratio * q;
        const double pr = std::round(p);
        if (pr >= 1.0 && pr <= 64.0 && std::abs(p - pr) < 1e-9 * q) {
            const unsigned g = std::gcd(static_cast<unsigned>(pr), q);
            up = static_cast<unsigned>(pr) / g;
            down = q / g;
            return true;
        }
    }
    return false;
}

}  // namespace

std::vector<double> resample_filter_taps(unsigned up, unsigned down) {
    const unsigned r = std::max(up, down);
    const double fc = 0.5 / static_cast<double>(r);     // cycles/sample at the upsampled rate
    const double trans = 0.375 * fc;                    // total transition width
    const double atten_db = 70.0;
    const double beta = 0.1102 * (atten_db - 8.7);
    unsigned n = static_cast<unsigned>(std::ceil((atten_db - 7.95) /
                                                 (2.285 * 2.0 * std::numbers::pi * trans)));
    if (n % 2 == 0) ++n;  // odd length, integer group delay

    std::vector<double> h(n);
    const double mid = 0.5 * static_cast<double>(n - 1);
    const double i0b = bessel_i0(beta);
    for (unsigned i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) - mid;
        const double x = 2.0 * fc * t;
        const double sinc = (std::abs(x) < 1e-12)
                                ? 1.0
                                : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
        const double u = t / mid;
        const double win = bessel_i0(beta * std::sqrt(std::max(0.0, 1.0 - u * u))) / i0b;
        h[i] = 2.0 * fc * sinc * win;
    }
    // unity DC gain before the interpolation gain
    double s = 0.0;
    for (double v : h) s += v;
    for (auto& v : h) v *= static_cast<double>(up) / s;
    return h;
}

ComplexBuffer resample(const ComplexBuffer& x, double target_rate_hz) {
    if (target_rate_hz <= 0.0) throw std::invalid_argument("resample: target rate must be > 0");
    if (x.empty()) throw std::invalid_argument("resample: empty input");

    const double ratio = target_rate_hz / x.sample_rate_hz;
    unsigned up = 0, down = 0;
    if (!find_ratio(ratio, up, down))
        throw std::invalid_argument("resample: rate ratio is not a small rational");
    if (up == 1 && down == 1) {
        ComplexBuffer out = x;
        out.sample_rate_hz = target_rate_hz;
        return out;
    }

    const auto h = resample_filter_taps(up, down);
    const std::ptrdiff_t delay = static_cast<std::ptrdiff_t>(h.size() - 1) / 2;
    const std::ptrdiff_t nin = static_cast<std::ptrdiff_t>(x.size());
    const std::ptrdiff_t nout =
        (nin * static_cast<std::ptrdiff_t>(up) + static_cast<std::ptrdiff_t>(down) - 1) /
        static_cast<std::ptrdiff_t>(down);

    ComplexBuffer out(static_cast<std::size_t>(nout), target_rate_hz);
    const std::ptrdiff_t L = up, M = down, nh = static_cast<std::ptrdiff_t>(h.size());
    for (std::ptrdiff_t n = 0; n < nout; ++n) {
        const std::ptrdiff_t j = n * M + delay;  // upsampled-grid index, delay-compensated
        cdouble acc(0.0, 0.0);
        // only taps hitting nonzero (stuffed) input samples
        const std::ptrdiff_t rem = ((j % L) + L) % L;
        for (std::ptrdiff_t t = rem; t < nh; t += L) {
            const std::ptrdiff_t i = (j - t) / L;
            if (i >= 0 && i < nin) acc += x.samples[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(t)];
        }
        out.samples[static_cast<std::size_t>(n)] = acc;
    }
    return out;
}

}  // namespace covertlink
