#pragma once

#include <cstdint>
#include <vector>

#include "covertlink/complex_buffer.hpp"
#include "covertlink/ofdm/config.hpp"

namespace covertlink::ofdm {

/// A modulated packet plus everything needed to reproduce or check it.
struct OfdmPacket {
    ComplexBuffer waveform;                       // preamble + payload, 20 MSPS
    std::vector<std::uint8_t> psdu;               // octets
    Mcs mcs;
    std::uint8_t scrambler_seed = 0x5d;
    int n_symbols = 0;
    std::vector<std::vector<cdouble>> data_vectors;  // 64 bins per payload symbol
};

/// PSDU octets -> packet waveform: scramble, convolutional encode, puncture,
/// interleave, map, pilots/nulls, 64-point transform, cyclic prefix,
/// preamble. No transmit windowing is applied anywhere, so a remodulation
/// from the same bits is sample-exact.
OfdmPacket modulate(const std::vector<std::uint8_t>& psdu, const Mcs& mcs, const OfdmConfig& cfg,
                    std::uint8_t scrambler_seed = 0x5d);

/// Rebuild the transmit waveform from recovered bits. Identical code path to
/// modulate; with error-free bits the output equals the transmitted samples
/// exactly.
ComplexBuffer remodulate(const std::vector<std::uint8_t>& psdu, const Mcs& mcs,
                         const OfdmConfig& cfg, std::uint8_t scrambler_seed);

}  // namespace covertlink::ofdm
