#include "covertlink/harness/mask.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "covertlink/dsp.hpp"

namespace covertlink::sim {

double MaskSpec::limit_dbr(double freq_hz) const {
    const double f = std::abs(freq_hz);
    if (f <= breakpoints.front().first) return breakpoints.front().second;
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        if (f <= breakpoints[i].first) {
            const auto& [f0, l0] = breakpoints[i - 1];
            const auto& [f1, l1] = breakpoints[i];
            return l0 + (l1 - l0) * (f - f0) / (f1 - f0);
        }
    }
    return breakpoints.back().second;
}

MaskReport check_spectral_mask(const ComplexBuffer& x, const MaskSpec& spec) {
    if (x.size() < spec.nfft)
        throw std::invalid_argument("check_spectral_mask: buffer too short for PSD resolution");

    const auto psd = psd_estimate(x, spec.nfft);
    const auto freqs = psd_frequencies(x.sample_rate_hz, spec.nfft);

    // 0 dBr reference: the strongest bin
    double ref = psd[0];
    for (double v : psd) ref = std::max(ref, v);

    MaskReport rep;
    const double edge = spec.breakpoints.front().first;
    const double nyquist = x.sample_rate_hz / 2.0;

    rep.min_mask_margin_db = 1e9;
    for (std::size_t i = 0; i < psd.size(); ++i) {
        const double f = std::abs(freqs[i]);
        if (f < edge) continue;
        const double margin = spec.limit_dbr(f) - (psd[i] - ref);
        rep.min_mask_margin_db = std::min(rep.min_mask_margin_db, margin);
    }

    for (const auto& [bf, limit] : spec.breakpoints) {
        if (bf > nyquist) continue;  // not observable at this rate
        // nearest bins on both sides of the axis; take the worse one
        double worst = 1e9;
        double worst_psd = 0.0;
        for (double f : {bf, -bf}) {
            std::size_t best = 0;
            double dbest = 1e18;
            for (std::size_t i = 0; i < freqs.size(); ++i) {
                const double d = std::abs(freqs[i] - f);
                if (d < dbest) { dbest = d; best = i; }
            }
            const double margin = limit - (psd[best] - ref);
            if (margin < worst) { worst = margin; worst_psd = psd[best] - ref; }
        }
        rep.breakpoints.push_back({bf, limit, worst_psd, worst});
    }

    // DC clearance: occupied-band average vs the DC bin
    double occ = 0.0;
    int nocc = 0;
    double dc = -300.0;
    for (std::size_t i = 0; i < psd.size(); ++i) {
        const double f = std::abs(freqs[i]);
        if (f < x.sample_rate_hz / static_cast<double>(spec.nfft)) dc = std::max(dc, psd[i]);
        if (f >= 0.4e6 && f <= 8.0e6) {
            occ += std::pow(10.0, psd[i] / 10.0);
            ++nocc;
        }
    }
    const double occ_db = 10.0 * std::log10(occ / std::max(nocc, 1));
    rep.dc_delta_db = occ_db - dc;
    rep.dc_margin_db = rep.dc_delta_db - spec.dc_clearance_db;
    rep.overall_margin_db = std::min(rep.min_mask_margin_db, rep.dc_margin_db);

    rep.pass = rep.overall_margin_db >= 0.0;
    for (const auto& bp : rep.breakpoints) rep.pass = rep.pass && bp.margin_db >= 0.0;
    return rep;
}

std::string mask_report_text(const MaskReport& rep) {
    std::ostringstream os;
    os << (rep.pass ? "PASS" : "FAIL") << "  overall margin " << rep.overall_margin_db
       << " dB\n";
    for (const auto& bp : rep.breakpoints)
        os << "  " << bp.freq_hz / 1e6 << " MHz: limit " << bp.limit_dbr << " dBr, psd "
           << bp.psd_dbr << " dBr, margin " << bp.margin_db << " dB\n";
    os << "  mask margin (all bins) " << rep.min_mask_margin_db << " dB\n";
    os << "  DC clearance " << rep.dc_delta_db << " dB (margin " << rep.dc_margin_db << " dB)\n";
    return os.str();
}

}  // namespace covertlink::sim
