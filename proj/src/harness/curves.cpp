#include "covertlink/harness/curves.hpp"

#include <cstdio>
#include <sstream>

namespace covertlink::sim {

void wilson_interval(long errors, long trials, double& lo, double& hi) {
    if (trials <= 0) { lo = 0.0; hi = 1.0; return; }
    const double z = 1.959963984540054;  // 97.5th percentile
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(errors) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    lo = std::max(0.0, center - half);
    hi = std::min(1.0, center + half);
}

CurvePoint make_point(double x_db, long errors, long trials) {
    CurvePoint pt;
    pt.x_db = x_db;
    pt.trials = trials;
    pt.errors = errors;
    pt.rate = trials > 0 ? static_cast<double>(errors) / static_cast<double>(trials) : 0.0;
    wilson_interval(errors, trials, pt.ci_lo, pt.ci_hi);
    return pt;
}

std::string fmt_double(double v, bool empty_for_nan) {
    if (std::isnan(v)) return empty_for_nan ? "" : "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string curves_to_csv(const std::string& experiment, const std::vector<Curve>& curves,
                          std::uint64_t seed, bool x_is_sir) {
    std::ostringstream os;
    os << "experiment,mcs,snr_db,sir_db,trials,errors,rate,ci_lo,ci_hi,mean_suppression_db,seed\n";
    for (const auto& c : curves) {
        for (const auto& p : c.points) {
            const double snr = x_is_sir ? c.snr_db : p.x_db;
            const double sir = x_is_sir ? p.x_db : std::numeric_limits<double>::quiet_NaN();
            os << experiment << ',';
            if (c.mcs >= 0) os << c.mcs;
            os << ',' << fmt_double(snr, true) << ',' << fmt_double(sir, true) << ','
               << p.trials << ',' << p.errors << ',' << fmt_double(p.rate) << ','
               << fmt_double(p.ci_lo) << ',' << fmt_double(p.ci_hi) << ','
               << fmt_double(p.mean_suppression_db, true) << ',' << seed << '\n';
        }
    }
    return os.str();
}

std::string packets_to_csv(const std::string& experiment, const std::vector<PacketReport>& rows,
                           std::uint64_t seed) {
    std::ostringstream os;
    os << "experiment,packet,sir_db,snr_db,suppression_db,scale,phase,ofdm_bit_errors,"
          "packet_ok,used_fallback,covert_bits,covert_errors,seed\n";
    for (const auto& r : rows) {
        os << experiment << ',' << r.index << ',' << fmt_double(r.sir_db) << ','
           << fmt_double(r.snr_db, true) << ',' << fmt_double(r.suppression_db) << ','
           << fmt_double(r.scale) << ',' << fmt_double(r.phase) << ',' << r.ofdm_bit_errors
           << ',' << (r.packet_ok ? 1 : 0) << ',' << (r.used_fallback ? 1 : 0) << ','
           << r.covert_bits << ',' << r.covert_errors << ',' << seed << '\n';
    }
    return os.str();
}

}  // namespace covertlink::sim
