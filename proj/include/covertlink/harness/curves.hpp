#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace covertlink::sim {

/// One sweep point of a PER/BER curve with its Wilson interval.
struct CurvePoint {
    double x_db = 0.0;
    long trials = 0;
    long errors = 0;
    double rate = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double mean_suppression_db = std::numeric_limits<double>::quiet_NaN();
};

struct Curve {
    std::string label;
    int mcs = -1;
    double snr_db = std::numeric_limits<double>::quiet_NaN();  // NaN = not applicable
    std::vector<CurvePoint> points;
};

/// 95% Wilson score interval.
void wilson_interval(long errors, long trials, double& lo, double& hi);

CurvePoint make_point(double x_db, long errors, long trials);

/// Fixed-schema CSV:
/// experiment,mcs,snr_db,sir_db,trials,errors,rate,ci_lo,ci_hi,mean_suppression_db,seed
/// NaN fields are left empty. Byte-deterministic for identical inputs.
std::string curves_to_csv(const std::string& experiment, const std::vector<Curve>& curves,
                          std::uint64_t seed, bool x_is_sir);

/// One row per processed packet for cancellation experiments.
struct PacketReport {
    long index = 0;
    double sir_db = 0.0;
    double snr_db = 0.0;
    double suppression_db = 0.0;
    double scale = 1.0;
    double phase = 0.0;
    long ofdm_bit_errors = -1;
    bool packet_ok = false;
    bool used_fallback = false;
    long covert_bits = 0;
    long covert_errors = 0;
};

std::string packets_to_csv(const std::string& experiment, const std::vector<PacketReport>& rows,
                           std::uint64_t seed);

/// "%.10g" with "inf"/"nan" spelled out; empty string for NaN when
/// allow_empty is set.
std::string fmt_double(double v, bool empty_for_nan = false);

}  // namespace covertlink::sim
