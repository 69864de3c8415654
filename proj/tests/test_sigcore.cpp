#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "covertlink/dsp.hpp"
#include "covertlink/pn.hpp"
#include "covertlink/resample.hpp"
#include "covertlink/rng.hpp"

using namespace covertlink;

namespace {

// independent direct-sum autocorrelation oracle
double oracle_max_sidelobe(const std::vector<int>& chips) {
    const int n = static_cast<int>(chips.size());
    double worst = 0.0;
    for (int lag = 1; lag < n; ++lag) {
        double s = 0.0;
        for (int i = 0; i + lag < n; ++i) s += chips[i] * chips[i + lag];
        worst = std::max(worst, std::abs(s));
    }
    return worst;
}

ComplexBuffer tone(double freq_hz, double fs, std::size_t n) {
    ComplexBuffer x(n, fs);
    for (std::size_t k = 0; k < n; ++k)
        x.samples[k] = std::polar(1.0, 2.0 * std::numbers::pi * freq_hz * k / fs);
    return x;
}

}  // namespace

TEST_CASE("lfsr z^6+z+1 has period 63 from the standard state") {
    const auto bits = lfsr_sequence(lfsr_poly_z6_z_1, lfsr_state_000001, 126);
    for (int i = 0; i < 63; ++i) CHECK(bits[i] == bits[i + 63]);
}

TEST_CASE("lfsr m-sequence balance: 32 ones, 31 zeros") {
    const auto bits = lfsr_sequence(lfsr_poly_z6_z_1, lfsr_state_000001, 63);
    int ones = 0;
    for (auto b : bits) ones += b;
    CHECK(ones == 32);
}

TEST_CASE("lfsr rejects the all-zero state") {
    CHECK_THROWS(lfsr_sequence(lfsr_poly_z6_z_1, 0, 10));
}

TEST_CASE("lfsr period 63 from every nonzero state") {
    for (std::uint32_t st = 1; st < 64; ++st) {
        const auto bits = lfsr_sequence(lfsr_poly_z6_z_1, st, 126);
        bool repeat63 = true;
        for (int i = 0; i < 63; ++i) repeat63 = repeat63 && bits[i] == bits[i + 63];
        CHECK(repeat63);
        // and no shorter period dividing 63
        for (int p : {7, 9, 21}) {
            bool rep = true;
            for (int i = 0; i + p < 63; ++i) rep = rep && bits[i] == bits[i + p];
            CHECK_FALSE(rep);
        }
    }
}

TEST_CASE("spreading code: 64 chips of +/-1 with the published sidelobe level") {
    const auto code = build_spreading_code();
    REQUIRE(code.length() == 64);
    for (int c : code.chips) CHECK((c == 1 || c == -1));

    const auto acf = aperiodic_autocorrelation(code.chips);
    CHECK(acf[63] == doctest::Approx(64.0));  // lag 0

    const double side = oracle_max_sidelobe(code.chips);
    CHECK(side == doctest::Approx(6.0));
    const double pslr = 20.0 * std::log10(64.0 / side);
    CHECK(pslr == doctest::Approx(20.56).epsilon(0.0025));  // 20.56 +/- 0.05 dB
    CHECK(code_pslr_db(code) == doctest::Approx(pslr).epsilon(1e-12));
}

TEST_CASE("xcorr basics") {
    const auto code = build_spreading_code();
    std::vector<cdouble> a(code.chips.begin(), code.chips.end());

    const auto self = xcorr(a, a);
    CHECK(self[63].real() == doctest::Approx(64.0));
    CHECK(std::abs(self[63]) == doctest::Approx(64.0));

    std::vector<cdouble> zeros(32, cdouble(0, 0));
    for (const auto& v : xcorr(a, zeros)) CHECK(std::abs(v) == 0.0);

    CHECK_THROWS(xcorr(std::vector<cdouble>{}, a));
}

TEST_CASE("xcorr of a cyclic shift lands the periodic value at the matching lag") {
    const auto code = build_spreading_code();
    std::vector<cdouble> a(code.chips.begin(), code.chips.end());
    std::vector<cdouble> shifted(64);
    for (int i = 0; i < 64; ++i) shifted[i] = a[(i + 5) % 64];

    // direct-summation oracle for the periodic autocorrelation at lag 5
    double periodic = 0.0;
    for (int i = 0; i < 64; ++i)
        periodic += code.chips[i] * code.chips[(i + 5) % 64];

    // xcorr(code, shifted) at lag -5: sum_n code[n-5] shifted[n]* = periodic acf
    const auto c = xcorr(a, shifted);
    const int zero_lag = 63;
    double full = 0.0;
    for (int n = 0; n < 64; ++n) {
        const int m = n - 5;
        if (m >= 0 && m < 64) full += a[m].real() * shifted[n].real();
    }
    CHECK(c[zero_lag - 5].real() == doctest::Approx(full));
    // the sum of the aperiodic value at -5 and at 59 is the periodic value
    CHECK(c[zero_lag - 5].real() + c[zero_lag + 59].real() == doctest::Approx(periodic));
}

TEST_CASE("xcorr symmetry: xcorr(a,b) is the conjugate reverse of xcorr(b,a)") {
    Rng rng(7);
    std::vector<cdouble> a(17), b(9);
    for (auto& v : a) v = cdouble(rng.gauss(), rng.gauss());
    for (auto& v : b) v = cdouble(rng.gauss(), rng.gauss());
    const auto ab = xcorr(a, b);
    const auto ba = xcorr(b, a);
    REQUIRE(ab.size() == ba.size());
    for (std::size_t i = 0; i < ab.size(); ++i)
        CHECK(std::abs(ab[i] - std::conj(ba[ba.size() - 1 - i])) < 1e-12);
}

TEST_CASE("measure_power_db") {
    ComplexBuffer c(1000, 20e6);
    for (auto& v : c.samples) v = cdouble(1.0, 0.0);
    CHECK(measure_power_db(c) == doctest::Approx(0.0).epsilon(1e-12));

    for (auto& v : c.samples) v *= 10.0;
    CHECK(measure_power_db(c) == doctest::Approx(20.0).epsilon(1e-12));

    ComplexBuffer z(16, 20e6);
    CHECK(measure_power_db(z) == -std::numeric_limits<double>::infinity());

    Rng rng(11);
    ComplexBuffer w(1000000, 20e6);
    const double sigma = std::sqrt(0.01 / 2.0);
    for (auto& v : w.samples) v = cdouble(sigma * rng.gauss(), sigma * rng.gauss());
    CHECK(measure_power_db(w) == doctest::Approx(-20.0).epsilon(0.005));  // +/- 0.1 dB
}

TEST_CASE("psd: sinusoid concentrates in the right bin") {
    const double fs = 20e6;
    const auto x = tone(fs / 4.0, fs, 8192);
    const auto psd = psd_estimate(x, 256);
    const auto f = psd_frequencies(fs, 256);
    std::size_t peak = 0;
    for (std::size_t i = 1; i < psd.size(); ++i)
        if (psd[i] > psd[peak]) peak = i;
    CHECK(f[peak] == doctest::Approx(fs / 4.0));
    // dominant: at least 30 dB over the median bin
    std::vector<double> sorted = psd;
    std::sort(sorted.begin(), sorted.end());
    CHECK(psd[peak] - sorted[sorted.size() / 2] > 30.0);
}

TEST_CASE("psd: white noise is flat and Parseval-consistent") {
    Rng rng(3);
    ComplexBuffer x(1000000, 20e6);
    for (auto& v : x.samples) v = cdouble(rng.gauss(), rng.gauss());
    const auto psd = psd_estimate(x, 256);
    double mn = psd[0], mx = psd[0], sum_lin = 0.0;
    for (double v : psd) {
        mn = std::min(mn, v);
        mx = std::max(mx, v);
        sum_lin += std::pow(10.0, v / 10.0);
    }
    const double mean_db = measure_power_db(x);
    CHECK(std::abs(10.0 * std::log10(sum_lin) - mean_db) < 0.5);
    CHECK(mx - mn < 3.0);  // +/- 1.5 dB around flat
}

TEST_CASE("psd: nfft larger than the buffer is rejected") {
    ComplexBuffer x(100, 20e6);
    CHECK_THROWS(psd_estimate(x, 256));
}

TEST_CASE("resample 40 -> 20 MSPS halves the length") {
    ComplexBuffer x(10001, 40e6);
    for (std::size_t i = 0; i < x.size(); ++i) x.samples[i] = cdouble(std::sin(0.01 * i), 0.0);
    const auto y = resample(x, 20e6);
    CHECK(y.sample_rate_hz == 20e6);
    CHECK(std::llabs(static_cast<long long>(y.size()) - 5001) <= 1);
}

TEST_CASE("resample passband flatness and stopband rejection") {
    const double fs = 40e6;
    // passband tone at 1 MHz
    {
        auto x = tone(1e6, fs, 40000);
        const auto y = resample(x, 20e6);
        const double in_db = measure_power_db(x);
        ComplexBuffer mid(std::vector<cdouble>(y.samples.begin() + 500, y.samples.end() - 500),
                          20e6);
        const double out_db = measure_power_db(mid);
        CHECK(std::abs(out_db - in_db) < 0.1);
    }
    // above the output Nyquist: 15 MHz must vanish
    {
        auto x = tone(15e6, fs, 40000);
        const auto y = resample(x, 20e6);
        ComplexBuffer mid(std::vector<cdouble>(y.samples.begin() + 500, y.samples.end() - 500),
                          20e6);
        const double out_db = measure_power_db(mid);
        CHECK(out_db < measure_power_db(x) - 40.0);
    }
}

TEST_CASE("resample round trip up/down is transparent in the passband") {
    Rng rng(5);
    // band-limited signal: smooth random passband tones
    const double fs = 20e6;
    ComplexBuffer x(20000, fs);
    for (int t = 0; t < 12; ++t) {
        const double f = rng.uniform(-7e6, 7e6);
        const cdouble a(rng.gauss(), rng.gauss());
        for (std::size_t k = 0; k < x.size(); ++k)
            x.samples[k] += a * std::polar(1.0, 2.0 * std::numbers::pi * f * k / fs);
    }
    const auto up = resample(x, 40e6);
    const auto back = resample(up, 20e6);
    double err = 0.0, ref = 0.0;
    for (std::size_t k = 500; k + 500 < x.size(); ++k) {
        err += std::norm(back.samples[k] - x.samples[k]);
        ref += std::norm(x.samples[k]);
    }
    CHECK(10.0 * std::log10(err / ref) < -55.0);
}

TEST_CASE("resample rejects silly ratios") {
    ComplexBuffer x(100, 20e6);
    CHECK_THROWS(resample(x, 20e6 * std::numbers::pi));
}

TEST_CASE("rng: identical seeds give identical streams, distinct seeds differ") {
    Rng a(42), b(42), c(43);
    bool same = true, diff = false;
    for (int i = 0; i < 1000; ++i) {
        const double x = a.gauss(), y = b.gauss(), z = c.gauss();
        same = same && (x == y);
        diff = diff || (x != z);
    }
    CHECK(same);
    CHECK(diff);
    CHECK(Rng::derive(1, 2) == Rng::derive(1, 2));
    CHECK(Rng::derive(1, 2) != Rng::derive(1, 3));
    CHECK(Rng::derive(1, 2) != Rng::derive(2, 2));
}
