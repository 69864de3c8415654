#include "covertlink/canceller.hpp"

#include <cmath>
#include <stdexcept>

#include "covertlink/dsp.hpp"

namespace covertlink::cancel {

namespace {

// 64 filter taps from the per-bin estimate, rearranged so index 32 is tap 0
// (taps [-32, 31]); covers causal multipath and the anti-causal spill of
// fractional delays.
std::vector<cdouble> taps_from_bins(const std::vector<cdouble>& bins) {
    auto h = ifft_of(bins);
    std::vector<cdouble> taps(64);
    for (int t = -32; t < 32; ++t) taps[t + 32] = h[(t + 64) % 64];
    return taps;
}

// linear convolution y[k] = sum_t taps[t] x[k - t], t in [-32, 31];
// output index k in [-32, len + 31] relative to x origin.
std::vector<cdouble> fir_apply(const std::vector<cdouble>& x, const std::vector<cdouble>& taps) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
    std::vector<cdouble> y(n + 64, cdouble(0.0, 0.0));
    for (std::ptrdiff_t k = -32; k < n + 32; ++k) {
        cdouble acc(0.0, 0.0);
        const std::ptrdiff_t t_lo = std::max<std::ptrdiff_t>(-32, k - n + 1);
        const std::ptrdiff_t t_hi = std::min<std::ptrdiff_t>(31, k);
        for (std::ptrdiff_t t = t_lo; t <= t_hi; ++t) acc += taps[t + 32] * x[k - t];
        y[k + 32] = acc;
    }
    return y;
}

double window_power(const std::vector<cdouble>& x, std::ptrdiff_t begin, std::ptrdiff_t len) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(begin, 0);
    const std::ptrdiff_t hi = std::min(begin + len, n);
    if (hi <= lo) return 0.0;
    double acc = 0.0;
    for (std::ptrdiff_t i = lo; i < hi; ++i) acc += std::norm(x[i]);
    return acc / static_cast<double>(hi - lo);
}

}  // namespace

ImpairedModel apply_estimated_impairments(const ComplexBuffer& s_hat,
                                          const ofdm::RxEstimates& est,
                                          const ofdm::OfdmConfig& cfg) {
    if (est.channel.size() != 64)
        throw std::invalid_argument("apply_estimated_impairments: need a 64-bin channel estimate");

    const auto taps = taps_from_bins(est.channel);
    auto y = fir_apply(s_hat.samples, taps);

    ImpairedModel model;
    model.start_in_r = est.packet_start - 32;
    model.samples = std::move(y);

    const std::ptrdiff_t sym_len = cfg.symbol_len();
    const std::ptrdiff_t payload = cfg.preamble_len();
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(model.samples.size()); ++i) {
        const std::ptrdiff_t k = i - 32;  // packet-relative sample index
        double ph = est.cfo_omega * static_cast<double>(k) + est.cfo_phi;
        if (!est.cpe_phase.empty() && k >= payload) {
            const std::ptrdiff_t p = (k - payload) / sym_len;
            if (p < static_cast<std::ptrdiff_t>(est.cpe_phase.size()))
                ph += est.cpe_phase[static_cast<std::size_t>(p)];
        }
        model.samples[i] *= std::polar(1.0, ph);
    }
    return model;
}

std::pair<double, double> refine_scale_phase(const std::vector<cdouble>& r_seg,
                                             const std::vector<cdouble>& model_seg) {
    if (r_seg.size() != model_seg.size() || r_seg.empty())
        throw std::invalid_argument("refine_scale_phase: segments must overlap");
    double pr = 0.0, pm = 0.0;
    cdouble cross(0.0, 0.0);
    for (std::size_t i = 0; i < r_seg.size(); ++i) {
        pr += std::norm(r_seg[i]);
        pm += std::norm(model_seg[i]);
        cross += r_seg[i] * std::conj(model_seg[i]);
    }
    if (pm <= 0.0) throw std::invalid_argument("refine_scale_phase: zero-power model");
    return {std::sqrt(pr / pm), std::arg(cross)};
}

std::pair<ComplexBuffer, CancellationReport> cancel_forward(
    const ComplexBuffer& r, const ofdm::RxEstimates& est, const ComplexBuffer& s_hat,
    const ofdm::OfdmConfig& cfg, std::ptrdiff_t window_begin, std::ptrdiff_t window_len) {
    if (s_hat.empty() || r.empty()) throw std::invalid_argument("cancel_forward: empty input");

    const auto model = apply_estimated_impairments(s_hat, est, cfg);
    ComplexBuffer residue = r;
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(r.size());
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(model.samples.size()); ++i) {
        const std::ptrdiff_t j = model.start_in_r + i;
        if (j >= 0 && j < n) residue.samples[j] -= model.samples[i];
    }

    if (window_begin < 0) {
        window_begin = est.packet_start;
        window_len = static_cast<std::ptrdiff_t>(s_hat.size());
    }
    CancellationReport rep;
    rep.mode = Mode::Forward;
    const double pr = window_power(r.samples, window_begin, window_len);
    const double pu = window_power(residue.samples, window_begin, window_len);
    rep.suppression_db = power_to_db(pu) - power_to_db(pr);
    return {std::move(residue), rep};
}

std::pair<ComplexBuffer, CancellationReport> cancel_inverse(
    const ComplexBuffer& r, const ofdm::RxEstimates& est, const ComplexBuffer& s_hat,
    const ofdm::OfdmConfig& cfg, std::ptrdiff_t window_begin, std::ptrdiff_t window_len) {
    if (s_hat.empty() || r.empty()) throw std::invalid_argument("cancel_inverse: empty input");
    if (est.channel.size() != 64)
        throw std::invalid_argument("cancel_inverse: need a 64-bin channel estimate");

    double mean_mag = 0.0;
    for (const auto& h : est.channel) mean_mag += std::abs(h);
    mean_mag /= 64.0;
    std::vector<cdouble> inv_bins(64);
    for (int i = 0; i < 64; ++i) {
        if (std::abs(est.channel[i]) < 1e-6 * mean_mag)
            throw std::invalid_argument("cancel_inverse: channel estimate is singular at a bin");
        inv_bins[i] = 1.0 / est.channel[i];
    }

    // Lambda_hat^* first (including the per-symbol pilot phases), then
    // per-bin equalization on the transform grid, then subtract the clean
    // remodulation. Payload prefixes are rebuilt from the circular extension
    // of each equalized window, matching the clean packet's own structure.
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(s_hat.size());
    std::vector<cdouble> z(n, cdouble(0.0, 0.0));
    const std::ptrdiff_t sym_len = cfg.symbol_len();
    const std::ptrdiff_t payload = cfg.preamble_len();
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        const std::ptrdiff_t j = est.packet_start + k;
        if (j < 0 || j >= static_cast<std::ptrdiff_t>(r.size())) continue;
        double ph = est.cfo_omega * static_cast<double>(k) + est.cfo_phi;
        if (!est.cpe_phase.empty() && k >= payload) {
            const std::ptrdiff_t p = (k - payload) / sym_len;
            if (p < static_cast<std::ptrdiff_t>(est.cpe_phase.size()))
                ph += est.cpe_phase[static_cast<std::size_t>(p)];
        }
        z[k] = r.samples[j] * std::polar(1.0, -ph);
    }

    std::vector<cdouble> eq(z.size(), cdouble(0.0, 0.0));
    auto equalize_window = [&](std::ptrdiff_t w0, std::ptrdiff_t keep) {
        if (w0 + 64 > n) return;
        std::vector<cdouble> blk(z.begin() + w0, z.begin() + w0 + 64);
        fft(blk, false);
        for (int b = 0; b < 64; ++b) blk[b] *= inv_bins[b];
        fft(blk, true);
        std::copy(blk.begin(), blk.begin() + keep, eq.begin() + w0);
    };
    for (std::ptrdiff_t w0 = 0; w0 + 64 <= payload; w0 += 64) equalize_window(w0, 64);
    for (std::ptrdiff_t p = 0; payload + (p + 1) * sym_len <= n; ++p) {
        const std::ptrdiff_t start = payload + p * sym_len;
        equalize_window(start, cfg.cp_len);      // prefix via its own window
        equalize_window(start + cfg.cp_len, 64);  // transform window of the body
    }

    ComplexBuffer residue(static_cast<std::size_t>(n), r.sample_rate_hz);
    for (std::ptrdiff_t k = 0; k < n; ++k)
        residue.samples[k] = eq[k] - s_hat.samples[k];

    if (window_begin < 0) {
        window_begin = est.packet_start;
        window_len = n;
    }
    CancellationReport rep;
    rep.mode = Mode::Inverse;
    const double pr = window_power(r.samples, window_begin, window_len);
    // the residue buffer is packet-aligned; shift the window accordingly
    const double pu = window_power(residue.samples, window_begin - est.packet_start, window_len);
    rep.suppression_db = power_to_db(pu) - power_to_db(pr);
    return {std::move(residue), rep};
}

RecoverResult recover_covert(const ComplexBuffer& r, const ofdm::Mcs& mcs, int psdu_octets,
                             const ofdm::OfdmConfig& cfg, const covert::CovertConfig& ccfg,
                             int n_bits, const RecoverOptions& opts) {
    RecoverResult out;
    out.ofdm = ofdm::demodulate(r, mcs, psdu_octets, cfg);

    std::ptrdiff_t packet_start = opts.fallback_packet_start;
    ComplexBuffer residue;
    if (!out.ofdm.found) {
        out.report.used_fallback = true;
        residue = r;  // degraded path: despread the raw samples
    } else {
        packet_start = out.ofdm.est.packet_start;
        const ComplexBuffer s_hat =
            ofdm::remodulate(out.ofdm.psdu, mcs, cfg, out.ofdm.scrambler_seed);

        auto model = apply_estimated_impairments(s_hat, out.ofdm.est, cfg);
        if (opts.refine) {
            // compare over the model samples that actually landed inside r
            const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(model.start_in_r, 0);
            const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(
                model.start_in_r + static_cast<std::ptrdiff_t>(model.samples.size()),
                static_cast<std::ptrdiff_t>(r.size()));
            std::vector<cdouble> rseg(r.samples.begin() + lo, r.samples.begin() + hi);
            std::vector<cdouble> mseg(model.samples.begin() + (lo - model.start_in_r),
                                      model.samples.begin() + (hi - model.start_in_r));
            const auto [scale, phase] = refine_scale_phase(rseg, mseg);
            out.report.scale_applied = scale;
            out.report.phase_applied = phase;
            const cdouble g = std::polar(scale, phase);
            for (auto& v : model.samples) v *= g;
        }

        residue = r;
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(model.samples.size()); ++i) {
            const std::ptrdiff_t j = model.start_in_r + i;
            if (j >= 0 && j < static_cast<std::ptrdiff_t>(residue.size()))
                residue.samples[j] -= model.samples[i];
        }
        out.report.ofdm_packet_ok = out.ofdm.packet_ok;
        out.report.snr_est_db = out.ofdm.est.snr_db;
        if (opts.truth_psdu) {
            long errs = 0;
            const auto& truth = *opts.truth_psdu;
            for (std::size_t i = 0; i < truth.size() && i < out.ofdm.psdu.size(); ++i) {
                std::uint8_t diff = truth[i] ^ out.ofdm.psdu[i];
                while (diff) { errs += diff & 1; diff >>= 1; }
            }
            out.report.ofdm_bit_errors = errs;
        }
    }

    const std::size_t covert_start = opts.covert_start
        ? *opts.covert_start
        : static_cast<std::size_t>(packet_start + ccfg.start_offset);
    const int sps = ccfg.samples_per_symbol();
    const std::size_t need = covert_start + static_cast<std::size_t>(n_bits) * sps;
    if (need > residue.size())
        n_bits = static_cast<int>((residue.size() - std::min(covert_start, residue.size())) / sps);
    if (n_bits > 0)
        out.despread = covert::covert_demodulate(residue, ccfg, n_bits, covert_start);

    const double pr = window_power(r.samples, static_cast<std::ptrdiff_t>(covert_start),
                                   static_cast<std::ptrdiff_t>(n_bits) * sps);
    const double pu = window_power(residue.samples, static_cast<std::ptrdiff_t>(covert_start),
                                   static_cast<std::ptrdiff_t>(n_bits) * sps);
    if (!out.report.used_fallback)
        out.report.suppression_db = power_to_db(pu) - power_to_db(pr);
    return out;
}

}  // namespace covertlink::cancel
