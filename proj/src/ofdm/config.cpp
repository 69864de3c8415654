#include "covertlink/ofdm/config.hpp"

namespace covertlink::ofdm {

const std::array<int, 48>& OfdmConfig::data_subcarriers() {
    static const std::array<int, 48> k = [] {
        std::array<int, 48> out{};
        int n = 0;
        for (int sc = -26; sc <= 26; ++sc) {
            if (sc == 0 || sc == 7 || sc == -7 || sc == 21 || sc == -21) continue;
            out[n++] = sc;
        }
        return out;
    }();
    return k;
}

const std::array<int, 4>& OfdmConfig::pilot_subcarriers() {
    static const std::array<int, 4> k = {-21, -7, 7, 21};
    return k;
}

const std::array<double, 4>& OfdmConfig::pilot_values() {
    static const std::array<double, 4> v = {1.0, 1.0, 1.0, -1.0};
    return v;
}

const std::array<int, 52>& OfdmConfig::occupied_subcarriers() {
    static const std::array<int, 52> k = [] {
        std::array<int, 52> out{};
        int n = 0;
        for (int sc = -26; sc <= 26; ++sc) {
            if (sc == 0) continue;
            out[n++] = sc;
        }
        return out;
    }();
    return k;
}

Mcs Mcs::from_index(int idx) {
    if (idx < 0 || idx > 7) throw std::invalid_argument("Mcs: index must be 0..7");
    static const Constellation cons[8] = {Constellation::BPSK,  Constellation::BPSK,
                                          Constellation::QPSK,  Constellation::QPSK,
                                          Constellation::QAM16, Constellation::QAM16,
                                          Constellation::QAM64, Constellation::QAM64};
    static const CodeRate rate[8] = {CodeRate::R1_2, CodeRate::R3_4, CodeRate::R1_2,
                                     CodeRate::R3_4, CodeRate::R1_2, CodeRate::R3_4,
                                     CodeRate::R2_3, CodeRate::R3_4};
    static const int nbpsc[8] = {1, 1, 2, 2, 4, 4, 6, 6};
    Mcs m;
    m.index = idx;
    m.constellation = cons[idx];
    m.code_rate = rate[idx];
    m.nbpsc = nbpsc[idx];
    m.ncbps = 48 * m.nbpsc;
    switch (rate[idx]) {
        case CodeRate::R1_2: m.ndbps = m.ncbps / 2; break;
        case CodeRate::R2_3: m.ndbps = m.ncbps * 2 / 3; break;
        case CodeRate::R3_4: m.ndbps = m.ncbps * 3 / 4; break;
    }
    return m;
}

}  // namespace covertlink::ofdm
