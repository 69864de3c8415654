#include "covertlink/ofdm/transmitter.hpp"

#include <cmath>
#include <stdexcept>

#include "covertlink/dsp.hpp"
#include "covertlink/ofdm/bits.hpp"
#include "covertlink/ofdm/mapping.hpp"
#include "covertlink/ofdm/preamble.hpp"

namespace covertlink::ofdm {

OfdmPacket modulate(const std::vector<std::uint8_t>& psdu, const Mcs& mcs, const OfdmConfig& cfg,
                    std::uint8_t scrambler_seed) {
    if (psdu.size() > 4095) throw std::invalid_argument("modulate: PSDU exceeds 4095 octets");
    if ((scrambler_seed & 0x7f) == 0) throw std::invalid_argument("modulate: zero scrambler seed");

    const int n_sym = mcs.symbols_for_psdu(static_cast<int>(psdu.size()));
    const std::size_t n_data_bits = static_cast<std::size_t>(n_sym) * mcs.ndbps;
    const std::size_t psdu_bits = 8 * psdu.size();

    // SERVICE (16 zeros) + PSDU (LSB first per octet) + 6 tail + pad
    BitVec bits(n_data_bits, 0);
    for (std::size_t i = 0; i < psdu_bits; ++i)
        bits[16 + i] = (psdu[i / 8] >> (i % 8)) & 1;

    scramble_in_place(bits, scrambler_seed);
    for (std::size_t i = 0; i < 6; ++i) bits[16 + psdu_bits + i] = 0;  // tail stays zero

    BitVec coded = puncture(conv_encode(bits), mcs.code_rate);
    if (coded.size() != static_cast<std::size_t>(n_sym) * mcs.ncbps)
        throw std::logic_error("modulate: coded length mismatch");

    const auto table = interleaver_table(mcs.ncbps, mcs.nbpsc);
    const auto& data_sc = OfdmConfig::data_subcarriers();
    const auto& pilot_sc = OfdmConfig::pilot_subcarriers();
    const auto& pilot_v = OfdmConfig::pilot_values();
    const auto& polarity = pilot_polarity();

    OfdmPacket pkt;
    pkt.psdu = psdu;
    pkt.mcs = mcs;
    pkt.scrambler_seed = scrambler_seed;
    pkt.n_symbols = n_sym;
    pkt.data_vectors.reserve(n_sym);

    auto& w = pkt.waveform.samples;
    pkt.waveform.sample_rate_hz = cfg.sample_rate_hz;
    w = build_preamble();
    w.reserve(320 + static_cast<std::size_t>(n_sym) * cfg.symbol_len());

    const double scale = 64.0 / std::sqrt(52.0);
    BitVec sym_bits(mcs.ncbps);
    for (int p = 0; p < n_sym; ++p) {
        std::copy(coded.begin() + static_cast<std::size_t>(p) * mcs.ncbps,
                  coded.begin() + static_cast<std::size_t>(p + 1) * mcs.ncbps, sym_bits.begin());
        const BitVec tx_bits = interleave(sym_bits, table);

        std::vector<cdouble> bins(64, cdouble(0.0, 0.0));
        for (int d = 0; d < 48; ++d)
            bins[OfdmConfig::bin_of(data_sc[d])] = map_symbol(&tx_bits[d * mcs.nbpsc], mcs.nbpsc);
        const int pol = polarity[(p + 1) % 127];
        for (int q = 0; q < 4; ++q)
            bins[OfdmConfig::bin_of(pilot_sc[q])] = pol * pilot_v[q];
        pkt.data_vectors.push_back(bins);

        auto t = ifft_of(bins);
        for (auto& v : t) v *= scale;
        // cyclic prefix then the symbol body
        w.insert(w.end(), t.end() - cfg.cp_len, t.end());
        w.insert(w.end(), t.begin(), t.end());
    }
    return pkt;
}

ComplexBuffer remodulate(const std::vector<std::uint8_t>& psdu, const Mcs& mcs,
                         const OfdmConfig& cfg, std::uint8_t scrambler_seed) {
    return modulate(psdu, mcs, cfg, scrambler_seed).waveform;
}

}  // namespace covertlink::ofdm
