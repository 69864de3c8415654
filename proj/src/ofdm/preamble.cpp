#include "covertlink/ofdm/preamble.hpp"

#include <cmath>

#include "covertlink/dsp.hpp"

namespace covertlink::ofdm {

namespace {

// standard short-training frequency sequence: nonzero every 4th subcarrier
std::vector<cdouble> stf_bins() {
    std::vector<cdouble> bins(64, cdouble(0.0, 0.0));
    const double a = std::sqrt(13.0 / 6.0);
    const cdouble pp(a, a), mm(-a, -a);
    struct Entry { int sc; cdouble v; };
    const Entry entries[] = {
        {-24, pp}, {-20, mm}, {-16, pp}, {-12, mm}, {-8, mm}, {-4, pp},
        {4, mm},   {8, mm},   {12, pp},  {16, pp},  {20, pp}, {24, pp},
    };
    for (const auto& e : entries) bins[OfdmConfig::bin_of(e.sc)] = e.v;
    return bins;
}

std::vector<cdouble> time_symbol(const std::vector<cdouble>& bins) {
    // o[k] = (1/sqrt(52)) sum_m d[m] e^{j2pi mk/64}
    auto t = ifft_of(bins);
    const double scale = 64.0 / std::sqrt(52.0);
    for (auto& v : t) v *= scale;
    return t;
}

}  // namespace

const std::vector<double>& ltf_sequence() {
    static const std::vector<double> seq = [] {
        std::vector<double> bins(64, 0.0);
        static const int neg[26] = {1, 1, -1, -1, 1, 1, -1, 1, -1, 1, 1, 1, 1,
                                    1, 1, -1, -1, 1, 1, -1, 1, -1, 1, 1, 1, 1};
        static const int pos[26] = {1, -1, -1, 1,  1,  -1, 1,  -1, 1,  -1, -1, -1, -1,
                                    -1, 1, 1,  -1, -1, 1,  -1, 1,  -1, 1,  1,  1,  1};
        for (int i = 0; i < 26; ++i) {
            bins[OfdmConfig::bin_of(-26 + i)] = neg[i];
            bins[OfdmConfig::bin_of(1 + i)] = pos[i];
        }
        return bins;
    }();
    return seq;
}

const std::vector<cdouble>& stf_period() {
    static const std::vector<cdouble> period = [] {
        auto t = time_symbol(stf_bins());
        return std::vector<cdouble>(t.begin(), t.begin() + 16);
    }();
    return period;
}

const std::vector<cdouble>& ltf_symbol() {
    static const std::vector<cdouble> sym = [] {
        const auto& seq = ltf_sequence();
        std::vector<cdouble> bins(64);
        for (int i = 0; i < 64; ++i) bins[i] = seq[i];
        return time_symbol(bins);
    }();
    return sym;
}

std::vector<cdouble> build_preamble() {
    std::vector<cdouble> out;
    out.reserve(320);
    const auto& sp = stf_period();
    for (int rep = 0; rep < 10; ++rep) out.insert(out.end(), sp.begin(), sp.end());
    const auto& lt = ltf_symbol();
    out.insert(out.end(), lt.end() - 32, lt.end());  // double-length guard
    out.insert(out.end(), lt.begin(), lt.end());
    out.insert(out.end(), lt.begin(), lt.end());
    return out;
}

}  // namespace covertlink::ofdm
