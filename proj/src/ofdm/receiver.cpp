#include "covertlink/ofdm/receiver.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "covertlink/dsp.hpp"
#include "covertlink/ofdm/bits.hpp"
#include "covertlink/ofdm/mapping.hpp"
#include "covertlink/ofdm/preamble.hpp"

namespace covertlink::ofdm {

namespace {

constexpr double kDetectThreshold = 0.55;
constexpr int kDetectRun = 40;       // samples the metric must stay high
constexpr int kCorrWindow = 48;      // short-training correlation window

struct Plateau {
    bool found = false;
    std::ptrdiff_t start = 0;
    double cfo_omega = 0.0;
};

Plateau find_stf_plateau(const std::vector<cdouble>& r) {
    Plateau out;
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(r.size());
    if (n < kCorrWindow + 16 + kDetectRun) return out;

    cdouble p(0.0, 0.0);
    double e = 0.0;
    for (int i = 0; i < kCorrWindow; ++i) {
        p += r[i] * std::conj(r[i + 16]);
        e += std::norm(r[i + 16]);
    }

    int run = 0;
    std::ptrdiff_t run_start = 0;
    cdouble p_acc(0.0, 0.0);
    const std::ptrdiff_t last = n - kCorrWindow - 16;
    for (std::ptrdiff_t k = 0; k <= last; ++k) {
        const double metric = std::abs(p) / std::max(e, 1e-30);
        if (metric > kDetectThreshold) {
            if (run == 0) {
                run_start = k;
                p_acc = cdouble(0.0, 0.0);
            }
            ++run;
            if (run > 8) p_acc += p;  // skip the plateau edge for the CFO average
            if (run >= kDetectRun) {
                out.found = true;
                out.start = run_start;
                out.cfo_omega = -std::arg(p_acc) / 16.0;
                return out;
            }
        } else {
            run = 0;
        }
        if (k < last) {
            p -= r[k] * std::conj(r[k + 16]);
            p += r[k + kCorrWindow] * std::conj(r[k + kCorrWindow + 16]);
            e -= std::norm(r[k + 16]);
            e += std::norm(r[k + kCorrWindow + 16]);
        }
    }
    return out;
}

}  // namespace

std::vector<cdouble> rx_transform(const cdouble* block) {
    std::vector<cdouble> bins(block, block + 64);
    fft(bins, false);
    const double scale = std::sqrt(52.0) / 64.0;
    for (auto& v : bins) v *= scale;
    return bins;
}

RxEstimates detect_and_sync(const ComplexBuffer& r, const OfdmConfig& cfg) {
    (void)cfg;
    RxEstimates est;
    const auto& x = r.samples;
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());

    const Plateau pl = find_stf_plateau(x);
    if (!pl.found) return est;
    est.coarse_start = pl.start;

    // long-training cross-correlation, CFO-corrected with the coarse estimate
    const auto& lt = ltf_symbol();
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, pl.start + 120);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 128, pl.start + 280);
    if (hi <= lo) return est;

    auto corr_at = [&](std::ptrdiff_t j) {
        cdouble acc(0.0, 0.0);
        for (int i = 0; i < 64; ++i) {
            const double ph = -pl.cfo_omega * static_cast<double>(j + i - pl.start);
            const cdouble z = x[j + i] * std::polar(1.0, ph);
            acc += z * std::conj(lt[i]);
        }
        return acc;
    };

    std::ptrdiff_t best_j = lo;
    double best_score = -1.0;
    for (std::ptrdiff_t j = lo; j <= hi; ++j) {
        const double score = std::abs(corr_at(j)) + std::abs(corr_at(j + 64));
        if (score > best_score) {
            best_score = score;
            best_j = j;
        }
    }
    est.packet_start = best_j - 192;
    est.detected = true;

    // refined CFO from the lag-64 correlation across the two long symbols
    cdouble p64(0.0, 0.0);
    for (int i = 0; i < 64; ++i) p64 += x[best_j + i] * std::conj(x[best_j + 64 + i]);
    const double delta = -std::arg(p64 * std::polar(1.0, +pl.cfo_omega * 64.0)) / 64.0;
    est.cfo_omega = pl.cfo_omega + delta;
    est.cfo_phi = 0.0;

    // final refinement: weighted phase-slope fit over the whole preamble.
    // Chunks are grouped by identical content (STF periods, the two long
    // symbol halves) so an unknown per-content channel phase cancels.
    if (est.packet_start >= 0 &&
        est.packet_start + 320 <= static_cast<std::ptrdiff_t>(n)) {
        const auto tmpl = build_preamble();
        struct Chunk { int begin, len, group; };
        // group members carry identical content even after a channel of up to
        // cp_len taps (their convolution windows stay inside periodic spans),
        // so the unknown per-content channel phase drops out of the fit
        std::vector<Chunk> chunks;
        for (int c = 1; c < 10; ++c) chunks.push_back({16 * c, 16, 0});
        chunks.push_back({176, 32, 1});
        chunks.push_back({240, 32, 1});
        chunks.push_back({208, 32, 2});
        chunks.push_back({272, 32, 2});

        std::vector<cdouble> corr(chunks.size());
        std::vector<double> tc(chunks.size()), w(chunks.size());
        cdouble gsum[3] = {};
        for (std::size_t c = 0; c < chunks.size(); ++c) {
            cdouble acc(0.0, 0.0);
            for (int i = 0; i < chunks[c].len; ++i) {
                const std::ptrdiff_t k = chunks[c].begin + i;
                acc += x[est.packet_start + k] *
                       std::polar(1.0, -est.cfo_omega * static_cast<double>(k)) *
                       std::conj(tmpl[k]);
            }
            corr[c] = acc;
            tc[c] = chunks[c].begin + 0.5 * chunks[c].len;
            w[c] = chunks[c].len;
            gsum[chunks[c].group] += acc;
        }
        double tbar[3] = {}, wsum[3] = {};
        for (std::size_t c = 0; c < chunks.size(); ++c) {
            tbar[chunks[c].group] += w[c] * tc[c];
            wsum[chunks[c].group] += w[c];
        }
        for (int g = 0; g < 3; ++g) tbar[g] /= wsum[g];
        double num = 0.0, den = 0.0;
        for (std::size_t c = 0; c < chunks.size(); ++c) {
            const int g = chunks[c].group;
            const double dphi = std::arg(corr[c] * std::conj(gsum[g]));
            const double dt = tc[c] - tbar[g];
            num += w[c] * dt * dphi;
            den += w[c] * dt * dt;
        }
        if (den > 0.0) est.cfo_omega += num / den;
    }
    return est;
}

void estimate_channel(const ComplexBuffer& r, RxEstimates& est, const OfdmConfig& cfg) {
    (void)cfg;
    if (!est.detected) throw std::invalid_argument("estimate_channel: no detected packet");
    const auto& x = r.samples;
    const std::ptrdiff_t ps = est.packet_start;
    if (ps < 0 || ps + 320 > static_cast<std::ptrdiff_t>(x.size()))
        throw std::invalid_argument("estimate_channel: preamble out of range");

    std::vector<cdouble> z1(64), z2(64);
    for (int i = 0; i < 64; ++i) {
        const double k1 = static_cast<double>(192 + i);
        const double k2 = static_cast<double>(256 + i);
        z1[i] = x[ps + 192 + i] * std::polar(1.0, -(est.cfo_omega * k1 + est.cfo_phi));
        z2[i] = x[ps + 256 + i] * std::polar(1.0, -(est.cfo_omega * k2 + est.cfo_phi));
    }
    const auto d1 = rx_transform(z1.data());
    const auto d2 = rx_transform(z2.data());

    const auto& seq = ltf_sequence();
    est.channel.assign(64, cdouble(0.0, 0.0));
    double noise_acc = 0.0;
    for (int bin = 0; bin < 64; ++bin) {
        if (seq[bin] == 0.0) continue;
        est.channel[bin] = (d1[bin] + d2[bin]) / (2.0 * seq[bin]);
        noise_acc += std::norm(d1[bin] - d2[bin]);
    }
    const double noise_bin = noise_acc / (52.0 * 2.0);  // var per training-symbol bin

    // interpolate nulls (DC and the guard band) linearly in magnitude/phase;
    // the guard run wraps from +26 around to -26
    auto interp_run = [&](int from_sc, int to_sc, int steps) {
        const cdouble a = est.channel[OfdmConfig::bin_of(from_sc)];
        const cdouble b = est.channel[OfdmConfig::bin_of(to_sc)];
        const double ma = std::abs(a), mb = std::abs(b);
        const double pa = std::arg(a);
        double pb = std::arg(b);
        while (pb - pa > std::numbers::pi) pb -= 2.0 * std::numbers::pi;
        while (pb - pa < -std::numbers::pi) pb += 2.0 * std::numbers::pi;
        for (int s = 1; s < steps; ++s) {
            const double t = static_cast<double>(s) / steps;
            const int sc = from_sc + s;  // may pass the +31/-32 wrap via bin_of
            est.channel[OfdmConfig::bin_of(sc)] =
                std::polar(ma + t * (mb - ma), pa + t * (pb - pa));
        }
    };
    interp_run(-1, 1, 2);     // DC
    interp_run(26, 38, 12);   // guards 27..31, -32..-27 (38 == -26 mod 64)

    double sig = 0.0;
    for (int sc : OfdmConfig::occupied_subcarriers()) sig += std::norm(est.channel[OfdmConfig::bin_of(sc)]);
    sig /= 52.0;
    const double noise_time = noise_bin * 64.0 / 52.0;
    // the averaged estimate carries noise_bin/2 of estimation noise
    est.snr_db = power_to_db(std::max(sig - noise_bin / 2.0, 1e-30) / std::max(noise_time, 1e-30));
}

DemodResult demodulate(const ComplexBuffer& r, const Mcs& mcs, int psdu_octets,
                       const OfdmConfig& cfg) {
    DemodResult res;
    res.est = detect_and_sync(r, cfg);
    if (!res.est.detected) return res;

    const int n_sym = mcs.symbols_for_psdu(psdu_octets);
    const std::ptrdiff_t ps = res.est.packet_start;
    const std::ptrdiff_t need = ps + cfg.packet_samples(n_sym);
    if (ps < 0 || need > static_cast<std::ptrdiff_t>(r.size())) return res;

    estimate_channel(r, res.est, cfg);

    const auto& x = r.samples;
    const auto& data_sc = OfdmConfig::data_subcarriers();
    const auto& pilot_sc = OfdmConfig::pilot_subcarriers();
    const auto& pilot_v = OfdmConfig::pilot_values();
    const auto& polarity = pilot_polarity();
    const auto table = interleaver_table(mcs.ncbps, mcs.nbpsc);

    std::vector<float> llrs;
    llrs.reserve(static_cast<std::size_t>(n_sym) * mcs.ncbps);
    std::vector<float> sym_llr(mcs.ncbps);
    std::vector<cdouble> block(64);
    res.est.cpe_phase.resize(n_sym, 0.0);

    for (int p = 0; p < n_sym; ++p) {
        const std::ptrdiff_t base = ps + 320 + static_cast<std::ptrdiff_t>(p) * cfg.symbol_len() +
                                    cfg.cp_len;
        for (int i = 0; i < 64; ++i) {
            const double k = static_cast<double>(base - ps + i);
            block[i] = x[base + i] * std::polar(1.0, -(res.est.cfo_omega * k + res.est.cfo_phi));
        }
        const auto d = rx_transform(block.data());

        // pilot-tracked common phase for this symbol
        const int pol = polarity[(p + 1) % 127];
        cdouble acc(0.0, 0.0);
        for (int q = 0; q < 4; ++q) {
            const int bin = OfdmConfig::bin_of(pilot_sc[q]);
            acc += d[bin] * std::conj(res.est.channel[bin] * (pol * pilot_v[q]));
        }
        const double cpe = std::arg(acc);
        res.est.cpe_phase[p] = cpe;
        const cdouble derot = std::polar(1.0, -cpe);

        for (int idx = 0; idx < 48; ++idx) {
            const int bin = OfdmConfig::bin_of(data_sc[idx]);
            const cdouble h = res.est.channel[bin];
            const double csi = std::norm(h);
            const cdouble e = d[bin] / h * derot;
            demap_soft(e, mcs.nbpsc, csi, &sym_llr[idx * mcs.nbpsc]);
        }
        const auto de = deinterleave(sym_llr, table);
        llrs.insert(llrs.end(), de.begin(), de.end());
    }

    const std::size_t n_data_bits = static_cast<std::size_t>(n_sym) * mcs.ndbps;
    const auto soft = depuncture(llrs, mcs.code_rate, n_data_bits);
    BitVec bits = viterbi_decode(soft, n_data_bits);

    res.scrambler_seed = recover_scrambler_seed(BitVec(bits.begin(), bits.begin() + 7));
    if (res.scrambler_seed == 0) res.scrambler_seed = 1;  // all-zero prefix: garbage decode
    scramble_in_place(bits, res.scrambler_seed);

    res.psdu.assign(psdu_octets, 0);
    for (int i = 0; i < 8 * psdu_octets; ++i)
        res.psdu[i / 8] |= static_cast<std::uint8_t>(bits[16 + i] << (i % 8));
    res.packet_ok = crc32_ok(res.psdu);
    res.found = true;
    return res;
}

}  // namespace covertlink::ofdm
