#include "covertlink/ofdm/bits.hpp"

#include <array>
#include <bit>
#include <limits>
#include <stdexcept>

namespace covertlink::ofdm {

BitVec scrambler_sequence(std::uint8_t seed, std::size_t n) {
    if ((seed & 0x7f) == 0) throw std::invalid_argument("scrambler: zero seed");
    std::uint32_t reg = seed & 0x7f;
    BitVec out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t fb = ((reg >> 6) ^ (reg >> 3)) & 1;
        out[i] = static_cast<std::uint8_t>(fb);
        reg = ((reg << 1) | fb) & 0x7f;
    }
    return out;
}

void scramble_in_place(BitVec& bits, std::uint8_t seed) {
    const auto seq = scrambler_sequence(seed, bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] ^= seq[i];
}

std::uint8_t recover_scrambler_seed(const BitVec& first7) {
    if (first7.size() < 7) throw std::invalid_argument("recover_scrambler_seed: need 7 bits");
    for (std::uint32_t seed = 1; seed < 128; ++seed) {
        const auto seq = scrambler_sequence(static_cast<std::uint8_t>(seed), 7);
        bool match = true;
        for (int i = 0; i < 7; ++i)
            if (seq[i] != first7[i]) { match = false; break; }
        if (match) return static_cast<std::uint8_t>(seed);
    }
    return 0;
}

const std::vector<int>& pilot_polarity() {
    static const std::vector<int> p = [] {
        const auto seq = scrambler_sequence(0x7f, 127);
        std::vector<int> out(127);
        for (int i = 0; i < 127; ++i) out[i] = seq[i] ? -1 : +1;
        return out;
    }();
    return p;
}

std::uint32_t crc32(const std::vector<std::uint8_t>& bytes, std::size_t len) {
    static const auto table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xedb88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    std::uint32_t crc = 0xffffffffu;
    for (std::size_t i = 0; i < len; ++i) crc = table[(crc ^ bytes[i]) & 0xff] ^ (crc >> 8);
    return crc ^ 0xffffffffu;
}

void append_crc32(std::vector<std::uint8_t>& psdu) {
    if (psdu.size() < 5) throw std::invalid_argument("append_crc32: psdu too short for an FCS");
    const std::uint32_t c = crc32(psdu, psdu.size() - 4);
    for (int i = 0; i < 4; ++i) psdu[psdu.size() - 4 + i] = static_cast<std::uint8_t>(c >> (8 * i));
}

bool crc32_ok(const std::vector<std::uint8_t>& psdu) {
    if (psdu.size() < 5) return false;
    const std::uint32_t c = crc32(psdu, psdu.size() - 4);
    for (int i = 0; i < 4; ++i)
        if (psdu[psdu.size() - 4 + i] != static_cast<std::uint8_t>(c >> (8 * i))) return false;
    return true;
}

namespace {
constexpr std::uint32_t kG0 = 0x5b;  // 133 octal
constexpr std::uint32_t kG1 = 0x79;  // 171 octal

inline std::uint8_t parity7(std::uint32_t v) {
    return static_cast<std::uint8_t>(std::popcount(v) & 1);
}
}  // namespace

BitVec conv_encode(const BitVec& bits) {
    BitVec out(2 * bits.size());
    std::uint32_t reg = 0;  // bits x_{n-1}..x_{n-6}
    for (std::size_t i = 0; i < bits.size(); ++i) {
        const std::uint32_t val = (static_cast<std::uint32_t>(bits[i]) << 6) | reg;
        out[2 * i] = parity7(val & kG0);
        out[2 * i + 1] = parity7(val & kG1);
        reg = (val >> 1) & 0x3f;
    }
    return out;
}

BitVec puncture(const BitVec& coded, CodeRate rate) {
    if (rate == CodeRate::R1_2) return coded;
    BitVec out;
    out.reserve(coded.size());
    if (rate == CodeRate::R2_3) {
        // keep A0 B0 A1, drop B1 (period 4)
        for (std::size_t i = 0; i < coded.size(); ++i)
            if (i % 4 != 3) out.push_back(coded[i]);
    } else {
        // 3/4: keep A0 B0 A1 B2, drop B1 A2 (period 6)
        for (std::size_t i = 0; i < coded.size(); ++i) {
            const std::size_t m = i % 6;
            if (m != 3 && m != 4) out.push_back(coded[i]);
        }
    }
    return out;
}

std::vector<float> depuncture(const std::vector<float>& llrs, CodeRate rate, std::size_t n_info) {
    std::vector<float> out(2 * n_info, 0.0f);
    std::size_t src = 0;
    if (rate == CodeRate::R1_2) {
        for (std::size_t i = 0; i < out.size() && src < llrs.size(); ++i) out[i] = llrs[src++];
    } else if (rate == CodeRate::R2_3) {
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (i % 4 == 3) continue;
            if (src < llrs.size()) out[i] = llrs[src++];
        }
    } else {
        for (std::size_t i = 0; i < out.size(); ++i) {
            const std::size_t m = i % 6;
            if (m == 3 || m == 4) continue;
            if (src < llrs.size()) out[i] = llrs[src++];
        }
    }
    return out;
}

std::vector<int> interleaver_table(int ncbps, int nbpsc) {
    const int s = std::max(nbpsc / 2, 1);
    std::vector<int> table(ncbps);
    for (int k = 0; k < ncbps; ++k) {
        const int i = (ncbps / 16) * (k % 16) + k / 16;
        const int j = s * (i / s) + (i + ncbps - (16 * i) / ncbps) % s;
        table[k] = j;
    }
    return table;
}

BitVec viterbi_decode(const std::vector<float>& llrs, std::size_t n_info) {
    if (llrs.size() < 2 * n_info) throw std::invalid_argument("viterbi: llr buffer too short");

    constexpr int kStates = 64;
    // Precomputed branch outputs: out[state][input] -> 2 bits.
    static const auto branch = [] {
        std::array<std::array<std::uint8_t, 2>, kStates> b{};
        for (int st = 0; st < kStates; ++st) {
            for (int in = 0; in < 2; ++in) {
                const std::uint32_t val = (static_cast<std::uint32_t>(in) << 6) |
                                          static_cast<std::uint32_t>(st);
                b[st][in] = static_cast<std::uint8_t>((parity7(val & kG0) << 1) |
                                                      parity7(val & kG1));
            }
        }
        return b;
    }();

    const float kNegInf = -std::numeric_limits<float>::max() / 4;
    std::vector<float> metric(kStates, kNegInf), next(kStates, kNegInf);
    metric[0] = 0.0f;  // encoder starts zeroed

    // one 64-bit word of survivor decisions per trellis step
    std::vector<std::uint64_t> decisions(n_info, 0);

    for (std::size_t step = 0; step < n_info; ++step) {
        const float la = llrs[2 * step];      // positive favors coded bit 0
        const float lb = llrs[2 * step + 1];
        std::fill(next.begin(), next.end(), kNegInf);
        std::uint64_t dec = 0;
        for (int st = 0; st < kStates; ++st) {
            const float m = metric[st];
            if (m == kNegInf) continue;
            for (int in = 0; in < 2; ++in) {
                const std::uint8_t out = branch[st][in];
                const float bm = ((out & 2) ? -la : la) + ((out & 1) ? -lb : lb);
                const int ns = ((st >> 1) | (in << 5));
                const float cand = m + bm;
                if (cand > next[ns]) {
                    next[ns] = cand;
                    // survivor branch came from a state whose bit5 is (st & 1)... store
                    // the predecessor's low bit instead: predecessor = st, and
                    // st = (ns << 1 | oldbit) & 63. Record oldbit.
                    if (st & 1)
                        dec |= (1ull << ns);
                    else
                        dec &= ~(1ull << ns);
                }
            }
        }
        decisions[step] = dec;
        metric.swap(next);
    }

    // best end state (tail may sit inside scrambled pad bits)
    int state = 0;
    float best = metric[0];
    for (int st = 1; st < kStates; ++st)
        if (metric[st] > best) { best = metric[st]; state = st; }

    BitVec bits(n_info);
    for (std::size_t step = n_info; step-- > 0;) {
        bits[step] = static_cast<std::uint8_t>((state >> 5) & 1);  // input bit = new bit 5
        const int oldbit = (decisions[step] >> state) & 1;
        state = ((state << 1) | oldbit) & 0x3f;
    }
    return bits;
}

}  // namespace covertlink::ofdm
