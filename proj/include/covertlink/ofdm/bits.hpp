#pragma once

#include <cstdint>
#include <vector>

#include "covertlink/ofdm/config.hpp"

namespace covertlink::ofdm {

using BitVec = std::vector<std::uint8_t>;

/// Frame scrambler, x^7 + x^4 + 1. Returns the first n output bits for a
/// 7-bit nonzero seed.
BitVec scrambler_sequence(std::uint8_t seed, std::size_t n);

/// XOR bits with the scrambler sequence (self-inverse).
void scramble_in_place(BitVec& bits, std::uint8_t seed);

/// The scrambler seed is recoverable from the first 7 descrambler inputs
/// because the first 7 data bits on the air are zeros. Brute-forces the 127
/// nonzero seeds. Returns 0 if nothing matches (cannot happen for 7 bits).
std::uint8_t recover_scrambler_seed(const BitVec& first7);

/// Pilot polarity sequence p_0..p_126 (+1/-1): scrambler stream from the
/// all-ones seed, 0 -> +1, 1 -> -1.
const std::vector<int>& pilot_polarity();

/// CRC-32 (reflected 0x04C11DB7, init/final 0xFFFFFFFF) used as the
/// FCS-style packet check: the last four PSDU octets hold the CRC of the
/// preceding ones.
std::uint32_t crc32(const std::vector<std::uint8_t>& bytes, std::size_t len);
void append_crc32(std::vector<std::uint8_t>& psdu);   // overwrites last 4 octets
bool crc32_ok(const std::vector<std::uint8_t>& psdu);

/// Rate-1/2 convolutional encoder, constraint length 7, generators 133/171
/// octal, starting from the zero state. Output is A0 B0 A1 B1 ...
BitVec conv_encode(const BitVec& bits);

/// Puncture rate-1/2 output up to 2/3 or 3/4 (standard patterns). R1_2 is
/// a pass-through.
BitVec puncture(const BitVec& coded, CodeRate rate);

/// Expand punctured soft values back to the rate-1/2 lattice, inserting
/// zero (erasure) LLRs at stolen positions. n_info is the number of
/// information bits the decoder will produce.
std::vector<float> depuncture(const std::vector<float>& llrs, CodeRate rate, std::size_t n_info);

/// Per-symbol block interleaver permutation: maps write index k (coded bit
/// order) to read index (transmit order). Two-permutation form with
/// s = max(nbpsc/2, 1).
std::vector<int> interleaver_table(int ncbps, int nbpsc);

template <typename T>
std::vector<T> interleave(const std::vector<T>& in, const std::vector<int>& table) {
    std::vector<T> out(in.size());
    for (std::size_t k = 0; k < in.size(); ++k) out[table[k]] = in[k];
    return out;
}

template <typename T>
std::vector<T> deinterleave(const std::vector<T>& in, const std::vector<int>& table) {
    std::vector<T> out(in.size());
    for (std::size_t k = 0; k < in.size(); ++k) out[k] = in[table[k]];
    return out;
}

/// Soft-decision Viterbi decoder for the K=7 133/171 code. llrs holds two
/// soft values per trellis step (positive favors bit 0); punctured positions
/// must already be zero-filled. Decodes n_info bits; traceback starts from
/// the best end-state metric.
BitVec viterbi_decode(const std::vector<float>& llrs, std::size_t n_info);

}  // namespace covertlink::ofdm
