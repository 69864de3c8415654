#pragma once

#include <string>
#include <vector>

#include "covertlink/complex_buffer.hpp"

namespace covertlink::sim {

/// 20 MHz transmit mask: 0 dBr out to +/-9 MHz, then linear interpolation
/// through the standard breakpoints. Breakpoints beyond the buffer's Nyquist
/// cannot be observed and are skipped. The checker also enforces a DC
/// clearance: the PSD at the DC bin must sit at least dc_clearance_db below
/// the occupied-band average (the covertness constraint for the hidden
/// signal).
struct MaskSpec {
    std::vector<std::pair<double, double>> breakpoints = {
        {9e6, 0.0}, {11e6, -20.0}, {20e6, -28.0}, {30e6, -40.0}};
    double dc_clearance_db = 20.0;
    std::size_t nfft = 256;

    double limit_dbr(double freq_hz) const;
};

struct MaskReport {
    bool pass = false;
    struct Point {
        double freq_hz;
        double limit_dbr;
        double psd_dbr;
        double margin_db;
    };
    std::vector<Point> breakpoints;   // resolvable standard breakpoints
    double min_mask_margin_db = 0.0;  // over all bins with |f| >= first breakpoint
    double dc_delta_db = 0.0;         // occupied average minus DC-bin PSD
    double dc_margin_db = 0.0;        // dc_delta - required clearance
    double overall_margin_db = 0.0;   // min(mask margin, dc margin)
};

MaskReport check_spectral_mask(const ComplexBuffer& x, const MaskSpec& spec = {});

std::string mask_report_text(const MaskReport& rep);

}  // namespace covertlink::sim
