#pragma once

#include <vector>

#include "covertlink/complex_buffer.hpp"
#include "covertlink/ofdm/bits.hpp"
#include "covertlink/ofdm/config.hpp"

namespace covertlink::ofdm {

/// Gray-mapped constellation point for nbpsc bits (BPSK/QPSK/16/64-QAM),
/// normalized to unit average energy.
cdouble map_symbol(const std::uint8_t* bits, int nbpsc);

/// Max-log per-bit LLRs for one received point. Positive favors bit 0.
/// csi scales the result (per-subcarrier channel power after equalization).
void demap_soft(cdouble y, int nbpsc, double csi, float* llr_out);

/// Hard slicer (nearest constellation point), for remodulation-style checks.
void demap_hard(cdouble y, int nbpsc, std::uint8_t* bits_out);

}  // namespace covertlink::ofdm
