#pragma once

#include <cstdint>
#include <vector>

#include "covertlink/complex_buffer.hpp"
#include "covertlink/pn.hpp"

namespace covertlink::covert {

/// The hidden signal's parameters: BPSK at 156.25 kbaud spread by the
/// 64-chip code at 10 Mcps, two samples per chip at 20 MSPS, so one covert
/// symbol spans 128 samples (6.4 us). start_offset places the frame inside
/// the host packet; by default it starts right after the preamble.
struct CovertConfig {
    double symbol_rate_hz = 156.25e3;
    double chip_rate_hz = 10e6;
    int samples_per_chip = 2;
    SpreadingCode code = build_spreading_code();
    int start_offset = 320;

    int samples_per_symbol() const {
        return static_cast<int>(code.length()) * samples_per_chip;  // 128
    }
    double symbol_duration_s() const { return 1.0 / symbol_rate_hz; }
};

struct CovertFrame {
    std::vector<std::uint8_t> bits;
    ComplexBuffer waveform;  // real-valued BPSK chips at baseband
};

/// Spread each bit (0 -> +1, 1 -> -1) by the code, rectangular chips held
/// samples_per_chip samples, centered at DC. Unit chip amplitude.
CovertFrame covert_modulate(const std::vector<std::uint8_t>& bits, const CovertConfig& cfg);

/// How many covert symbols fit in the given duration.
int capacity(double duration_s, const CovertConfig& cfg);

/// Bits that fit inside a host packet of n_samples at 20 MSPS, after the
/// start offset.
int capacity_for_packet(std::size_t n_samples, const CovertConfig& cfg);

/// Add the frame to the host buffer at host_offset, scaled so that
/// 10*log10(P_host / P_frame) = sir_db measured over the overlap window.
/// Host samples outside the overlap are untouched. Returns the applied
/// amplitude. Infinite sir_db leaves the host unchanged.
double inject(ComplexBuffer& host, const CovertFrame& frame, double sir_db,
              std::size_t host_offset);

struct DespreadResult {
    std::vector<std::uint8_t> bits;
    std::vector<cdouble> soft;        // correlator outputs, one per symbol
    std::vector<cdouble> chip_soft;   // chip matched-filter outputs (tests)
};

/// Chip matched filter (integrate samples_per_chip) then correlate against
/// the code per 64-chip window; sign of the real part decides each bit.
/// Timing is known a priori (start at `offset` in x).
DespreadResult covert_demodulate(const ComplexBuffer& x, const CovertConfig& cfg, int n_bits,
                                 std::size_t offset);

}  // namespace covertlink::covert
