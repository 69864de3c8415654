#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "covertlink/channel.hpp"
#include "covertlink/dsp.hpp"
#include "covertlink/ofdm/bits.hpp"
#include "covertlink/ofdm/mapping.hpp"
#include "covertlink/ofdm/preamble.hpp"
#include "covertlink/ofdm/receiver.hpp"
#include "covertlink/ofdm/transmitter.hpp"
#include "covertlink/rng.hpp"

using namespace covertlink;
using namespace covertlink::ofdm;

namespace {

std::vector<std::uint8_t> random_psdu(Rng& rng, int octets) {
    std::vector<std::uint8_t> p(octets);
    for (auto& b : p) b = static_cast<std::uint8_t>(rng.below(256));
    append_crc32(p);
    return p;
}

ComplexBuffer padded(const ComplexBuffer& w, int front = 100, int back = 60) {
    ComplexBuffer r(front + w.size() + back, w.sample_rate_hz);
    std::copy(w.samples.begin(), w.samples.end(), r.samples.begin() + front);
    return r;
}

}  // namespace

TEST_CASE("scrambler: self-inverse and seed recovery") {
    Rng rng(1);
    BitVec bits(200);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.bit());
    BitVec orig = bits;
    scramble_in_place(bits, 0x5d);
    CHECK(bits != orig);
    scramble_in_place(bits, 0x5d);
    CHECK(bits == orig);

    for (std::uint8_t seed : {1, 37, 91, 127}) {
        BitVec zeros(7, 0);
        scramble_in_place(zeros, seed);
        CHECK(recover_scrambler_seed(zeros) == seed);
    }
}

TEST_CASE("pilot polarity starts with the standard pattern") {
    const auto& p = pilot_polarity();
    REQUIRE(p.size() == 127);
    const int expect[16] = {1, 1, 1, 1, -1, -1, -1, 1, -1, -1, -1, -1, 1, 1, -1, 1};
    for (int i = 0; i < 16; ++i) CHECK(p[i] == expect[i]);
}

TEST_CASE("crc32 trailer detects corruption") {
    Rng rng(2);
    auto psdu = random_psdu(rng, 64);
    CHECK(crc32_ok(psdu));
    psdu[10] ^= 0x04;
    CHECK_FALSE(crc32_ok(psdu));
}

TEST_CASE("convolutional encoder impulse response matches the 133/171 generators") {
    BitVec impulse(7, 0);
    impulse[0] = 1;
    const auto out = conv_encode(impulse);
    const int g0[7] = {1, 0, 1, 1, 0, 1, 1};  // 133 octal msb-first
    const int g1[7] = {1, 1, 1, 1, 0, 0, 1};  // 171 octal
    for (int t = 0; t < 7; ++t) {
        CHECK(out[2 * t] == g0[t]);
        CHECK(out[2 * t + 1] == g1[t]);
    }
}

TEST_CASE("interleaver is a permutation and inverts") {
    for (int idx : {0, 2, 4, 6, 7}) {
        const auto mcs = Mcs::from_index(idx);
        const auto table = interleaver_table(mcs.ncbps, mcs.nbpsc);
        std::vector<int> seen(mcs.ncbps, 0);
        for (int v : table) {
            REQUIRE(v >= 0);
            REQUIRE(v < mcs.ncbps);
            seen[v]++;
        }
        for (int c : seen) CHECK(c == 1);

        Rng rng(idx);
        BitVec x(mcs.ncbps);
        for (auto& b : x) b = static_cast<std::uint8_t>(rng.bit());
        CHECK(deinterleave(interleave(x, table), table) == x);
    }
}

TEST_CASE("viterbi: clean decode at every code rate, with flipped-bit margin") {
    Rng rng(3);
    for (auto rate : {CodeRate::R1_2, CodeRate::R2_3, CodeRate::R3_4}) {
        BitVec bits(600, 0);
        for (std::size_t i = 0; i < bits.size() - 6; ++i)
            bits[i] = static_cast<std::uint8_t>(rng.bit());  // zero tail
        const auto coded = puncture(conv_encode(bits), rate);

        std::vector<float> llrs(coded.size());
        for (std::size_t i = 0; i < coded.size(); ++i) llrs[i] = coded[i] ? -1.0f : 1.0f;
        auto soft = depuncture(llrs, rate, bits.size());
        CHECK(viterbi_decode(soft, bits.size()) == bits);

        // a few flipped coded bits must still decode at rate 1/2
        if (rate == CodeRate::R1_2) {
            auto noisy = llrs;
            for (int k : {11, 230, 231, 600, 1100}) noisy[k] = -noisy[k];
            auto soft2 = depuncture(noisy, rate, bits.size());
            CHECK(viterbi_decode(soft2, bits.size()) == bits);
        }
    }
}

TEST_CASE("constellations have unit average energy and slice back") {
    for (int nbpsc : {1, 2, 4, 6}) {
        const int npoints = 1 << nbpsc;
        double energy = 0.0;
        for (int v = 0; v < npoints; ++v) {
            std::uint8_t bits[6];
            for (int b = 0; b < nbpsc; ++b) bits[b] = (v >> (nbpsc - 1 - b)) & 1;
            const cdouble pt = map_symbol(bits, nbpsc);
            energy += std::norm(pt);
            std::uint8_t back[6];
            demap_hard(pt, nbpsc, back);
            for (int b = 0; b < nbpsc; ++b) CHECK(back[b] == bits[b]);
        }
        CHECK(energy / npoints == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("preamble structure: 10 short periods, guard, two identical longs") {
    const auto pre = build_preamble();
    REQUIRE(pre.size() == 320);
    for (int i = 0; i < 160 - 16; ++i) CHECK(std::abs(pre[i] - pre[i + 16]) < 1e-12);
    for (int i = 0; i < 64; ++i) CHECK(std::abs(pre[192 + i] - pre[256 + i]) < 1e-12);
    for (int i = 0; i < 32; ++i) CHECK(std::abs(pre[160 + i] - pre[224 + i]) < 1e-12);
    ComplexBuffer b(std::vector<cdouble>(pre.begin(), pre.end()), 20e6);
    CHECK(measure_power_db(b) == doctest::Approx(0.0).epsilon(0.15));
}

TEST_CASE("modulate: 1000-octet MCS 7 packet occupies the rate-arithmetic symbol count") {
    // oracle: ceil((16 service + 8*1000 psdu + 6 tail) / 216 bits per symbol)
    const int bits = 16 + 8 * 1000 + 6;
    const int expect_sym = (bits + 215) / 216;

    Rng rng(4);
    const auto psdu = random_psdu(rng, 1000);
    const OfdmConfig cfg;
    const auto pkt = modulate(psdu, Mcs::from_index(7), cfg);
    CHECK(pkt.n_symbols == expect_sym);
    CHECK(pkt.waveform.size() == 320u + static_cast<std::size_t>(expect_sym) * 80u);
    CHECK(pkt.waveform.sample_rate_hz == 20e6);
    // payload power sits at unit level
    CHECK(measure_power_db(pkt.waveform) == doctest::Approx(0.0).epsilon(0.2));
}

TEST_CASE("modulate: DC bin of every payload symbol is exactly zero") {
    Rng rng(5);
    const auto psdu = random_psdu(rng, 100);
    const OfdmConfig cfg;
    const auto pkt = modulate(psdu, Mcs::from_index(3), cfg);
    for (int p = 0; p < pkt.n_symbols; ++p) {
        const auto* body = &pkt.waveform.samples[320 + 80 * p + 16];
        const auto bins = rx_transform(body);
        CHECK(std::abs(bins[0]) < 1e-12);
        // guard bins too
        CHECK(std::abs(bins[OfdmConfig::bin_of(27)]) < 1e-12);
        CHECK(std::abs(bins[OfdmConfig::bin_of(-30)]) < 1e-12);
    }
}

TEST_CASE("modulate: empty PSDU still yields the preamble plus one symbol") {
    const OfdmConfig cfg;
    const auto pkt = modulate({}, Mcs::from_index(0), cfg);
    CHECK(pkt.n_symbols == 1);
    CHECK(pkt.waveform.size() == 400u);
}

TEST_CASE("modulate rejects oversize PSDUs") {
    const OfdmConfig cfg;
    std::vector<std::uint8_t> big(4096, 0);
    CHECK_THROWS(modulate(big, Mcs::from_index(7), cfg));
}

TEST_CASE("remodulate reproduces modulate bit-exactly") {
    Rng rng(6);
    const auto psdu = random_psdu(rng, 257);
    const OfdmConfig cfg;
    const auto pkt = modulate(psdu, Mcs::from_index(5), cfg, 0x31);
    const auto again = remodulate(psdu, Mcs::from_index(5), cfg, 0x31);
    REQUIRE(again.size() == pkt.waveform.size());
    for (std::size_t i = 0; i < again.size(); ++i)
        CHECK(again.samples[i] == pkt.waveform.samples[i]);
}

TEST_CASE("one flipped PSDU bit perturbs exactly the symbols its coded bits touch") {
    Rng rng(7);
    const auto psdu = random_psdu(rng, 200);
    auto flipped = psdu;
    flipped[40] ^= 0x10;  // psdu bit 324 -> data bit 340

    const OfdmConfig cfg;
    const auto mcs = Mcs::from_index(4);
    const auto a = modulate(psdu, mcs, cfg, 0x44).waveform;
    const auto b = modulate(flipped, mcs, cfg, 0x44).waveform;

    // coded bits affected: trellis steps 340..346, two coded bits each at
    // rate 1/2 -> coded positions 680..693 inside symbols of 192 coded bits
    const int sym_lo = 680 / mcs.ncbps;
    const int sym_hi = 693 / mcs.ncbps;
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const bool differs = std::abs(a.samples[i] - b.samples[i]) > 1e-12;
        if (i < 320) { CHECK_FALSE(differs); continue; }
        const int sym = static_cast<int>((i - 320) / 80);
        if (sym < sym_lo || sym > sym_hi) CHECK_FALSE(differs);
    }
    double diff_power = 0.0;
    for (int sym = sym_lo; sym <= sym_hi; ++sym) {
        for (int i = 320 + 80 * sym; i < 320 + 80 * (sym + 1); ++i)
            diff_power += std::norm(a.samples[i] - b.samples[i]);
    }
    CHECK(diff_power > 0.1);
}

TEST_CASE("loopback: clean modulate->demodulate at every MCS") {
    Rng rng(8);
    const OfdmConfig cfg;
    for (int idx = 0; idx <= 7; ++idx) {
        const auto psdu = random_psdu(rng, 120);
        const auto pkt = modulate(psdu, Mcs::from_index(idx), cfg);
        const auto r = padded(pkt.waveform);
        const auto res = demodulate(r, Mcs::from_index(idx), 120, cfg);
        REQUIRE(res.found);
        CHECK(res.packet_ok);
        CHECK(res.psdu == psdu);
        CHECK(res.scrambler_seed == pkt.scrambler_seed);
        CHECK(res.est.packet_start == 100);
        CHECK(std::abs(res.est.cfo_omega) * 20e6 / (2 * std::numbers::pi) < 200.0);
    }
}

TEST_CASE("detect_and_sync: clean packet syncs exactly, noise yields nothing") {
    Rng rng(9);
    const OfdmConfig cfg;
    const auto psdu = random_psdu(rng, 64);
    const auto pkt = modulate(psdu, Mcs::from_index(0), cfg);
    const auto r = padded(pkt.waveform, 137, 60);
    const auto est = detect_and_sync(r, cfg);
    REQUIRE(est.detected);
    CHECK(est.packet_start == 137);
    CHECK(std::abs(est.cfo_omega) < 1e-9);

    ComplexBuffer noise(4000, 20e6);
    for (auto& v : noise.samples) v = cdouble(rng.gauss(), rng.gauss());
    CHECK_FALSE(detect_and_sync(noise, cfg).detected);
}

TEST_CASE("cfo estimation: exact on clean packets, 500 Hz rms at 23 dB SNR") {
    const OfdmConfig cfg;
    const double fs = cfg.sample_rate_hz;

    // clean packet with a 100 kHz offset: sample-exact timing, sub-Hz cfo
    {
        Rng rng(99);
        const auto psdu = random_psdu(rng, 100);
        const auto pkt = modulate(psdu, Mcs::from_index(0), cfg);
        chan::ChannelRealization ch;
        ch.cfo_omega = 2 * std::numbers::pi * 100e3 / fs;
        ch.cfo_phi = 1.1;
        ch.timing_offset = 90;
        auto r = chan::apply_channel(pkt.waveform, ch, rng);
        const auto est = detect_and_sync(r, cfg);
        REQUIRE(est.detected);
        CHECK(est.packet_start == 90);
        CHECK(std::abs(est.cfo_omega * fs / (2 * std::numbers::pi) - 100e3) < 5.0);
    }

    int trials = 0, good_timing = 0;
    double sq = 0.0, worst = 0.0;
    for (int t = 0; t < 25; ++t) {
        Rng rng(100 + t);
        const auto psdu = random_psdu(rng, 200);
        const auto pkt = modulate(psdu, Mcs::from_index(7), cfg);
        const double f_cfo = (t % 2 ? 1 : -1) * 50e3;
        chan::ChannelRealization ch;
        ch.cfo_omega = 2 * std::numbers::pi * f_cfo / fs;
        ch.cfo_phi = rng.uniform(0, 2 * std::numbers::pi);
        ch.timing_offset = 90;
        auto r = chan::apply_channel(pkt.waveform, ch, rng);
        r.samples.resize(r.size() + 50, cdouble(0, 0));
        chan::add_noise(r.samples, 0, r.size(), std::pow(10.0, -23.0 / 10.0), rng);

        const auto est = detect_and_sync(r, cfg);
        REQUIRE(est.detected);
        good_timing += est.packet_start == 90;
        const double f_hat = est.cfo_omega * fs / (2 * std::numbers::pi);
        sq += (f_hat - f_cfo) * (f_hat - f_cfo);
        worst = std::max(worst, std::abs(f_hat - f_cfo));
        ++trials;
    }
    CHECK(good_timing == trials);
    CHECK(std::sqrt(sq / trials) < 500.0);  // estimator rms at 23 dB
    CHECK(worst < 1500.0);
}

TEST_CASE("channel estimate: identity channel comes back as all ones") {
    Rng rng(10);
    const OfdmConfig cfg;
    const auto psdu = random_psdu(rng, 64);
    const auto pkt = modulate(psdu, Mcs::from_index(0), cfg);
    const auto r = padded(pkt.waveform, 0, 0);
    auto est = detect_and_sync(r, cfg);
    REQUIRE(est.detected);
    estimate_channel(r, est, cfg);
    for (int sc : OfdmConfig::occupied_subcarriers())
        CHECK(std::abs(est.channel[OfdmConfig::bin_of(sc)] - cdouble(1, 0)) < 1e-10);
    // DC is the midpoint of the +/-1 neighbors
    const cdouble a = est.channel[OfdmConfig::bin_of(-1)];
    const cdouble b = est.channel[OfdmConfig::bin_of(1)];
    CHECK(std::abs(est.channel[0]) ==
          doctest::Approx((std::abs(a) + std::abs(b)) / 2).epsilon(1e-9));
}

TEST_CASE("channel estimate matches the transform of a two-tap channel") {
    Rng rng(11);
    const OfdmConfig cfg;
    const auto psdu = random_psdu(rng, 64);
    const auto pkt = modulate(psdu, Mcs::from_index(0), cfg);
    chan::ChannelRealization ch;
    ch.taps = {cdouble(1.0, 0.0), cdouble(0.5, 0.0)};
    auto r = chan::apply_channel(pkt.waveform, ch, rng);
    auto est = detect_and_sync(r, cfg);
    REQUIRE(est.detected);
    estimate_channel(r, est, cfg);
    for (int sc : OfdmConfig::occupied_subcarriers()) {
        const int bin = OfdmConfig::bin_of(sc);
        const cdouble expect =
            1.0 + 0.5 * std::polar(1.0, -2.0 * std::numbers::pi * bin / 64.0);
        CHECK(std::abs(est.channel[bin] - expect) < 1e-9);
    }
}

TEST_CASE("per at the sensitivity snr stays at or below 10% for mcs 0 and 7") {
    const OfdmConfig cfg;
    for (int idx : {0, 7}) {
        const auto mcs = Mcs::from_index(idx);
        const double snr = sensitivity_snr_db[idx];
        int errors = 0;
        const int n = 60;
        for (int t = 0; t < n; ++t) {
            Rng rng(2000 + 31 * idx + t);
            const auto psdu = random_psdu(rng, 1000);
            const auto pkt = modulate(psdu, mcs, cfg, static_cast<std::uint8_t>(1 + rng.below(127)));
            auto r = padded(pkt.waveform);
            const double p = pkt.waveform.mean_power();
            chan::add_noise(r.samples, 0, r.size(), p * std::pow(10.0, -snr / 10.0), rng);
            const auto res = demodulate(r, mcs, 1000, cfg);
            errors += !(res.found && res.psdu == psdu);
        }
        INFO("mcs ", idx, " errors ", errors, "/", n);
        CHECK(errors <= n / 10);
    }
}

TEST_CASE("cfo correction identity: applying the ramp and its conjugate restores the buffer") {
    Rng rng(12);
    ComplexBuffer x(500, 20e6);
    for (auto& v : x.samples) v = cdouble(rng.gauss(), rng.gauss());
    const double w = 0.01, phi = 0.7;
    auto y = x;
    for (std::size_t k = 0; k < y.size(); ++k) y.samples[k] *= std::polar(1.0, w * k + phi);
    for (std::size_t k = 0; k < y.size(); ++k) y.samples[k] *= std::polar(1.0, -(w * k + phi));
    for (std::size_t k = 0; k < y.size(); ++k) CHECK(std::abs(y.samples[k] - x.samples[k]) < 1e-12);
}
