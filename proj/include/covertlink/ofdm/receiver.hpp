#pragma once

#include <cstdint>
#include <vector>

#include "covertlink/complex_buffer.hpp"
#include "covertlink/ofdm/config.hpp"

namespace covertlink::ofdm {

/// Everything the receiver learned about one packet. The CFO correction
/// convention is y[k] = r[packet_start + k] * e^{-j(omega*k + phi)}; the
/// constant phase at the packet start is absorbed into the channel estimate,
/// so phi stays 0 on the estimated path.
struct RxEstimates {
    bool detected = false;
    std::ptrdiff_t coarse_start = -1;   // short-training plateau onset
    std::ptrdiff_t packet_start = -1;   // fine timing: first preamble sample
    double cfo_omega = 0.0;             // rad/sample
    double cfo_phi = 0.0;               // rad
    std::vector<cdouble> channel;       // 64 bins, nulls interpolated
    std::vector<double> cpe_phase;      // per payload symbol, rad
    double snr_db = 0.0;
};

struct DemodResult {
    bool found = false;
    std::vector<std::uint8_t> psdu;
    bool packet_ok = false;             // FCS-style CRC over the PSDU
    std::uint8_t scrambler_seed = 0;
    RxEstimates est;
};

/// Packet detection via short-training autocorrelation (coarse timing +
/// CFO), then long-training cross-correlation for fine timing and the
/// refined CFO. detected=false when no plateau clears the threshold.
RxEstimates detect_and_sync(const ComplexBuffer& r, const OfdmConfig& cfg);

/// Least-squares per-bin channel estimate from the two long training
/// symbols; null bins (DC and guards) filled by linear interpolation in
/// magnitude and phase. Also estimates SNR from the training-symbol
/// difference. Requires est.detected.
void estimate_channel(const ComplexBuffer& r, RxEstimates& est, const OfdmConfig& cfg);

/// Full receive chain: sync, CFO correction, channel estimation, per-bin
/// equalization, pilot common-phase tracking, soft demapping, Viterbi,
/// descrambling. MCS and PSDU length arrive out of band.
DemodResult demodulate(const ComplexBuffer& r, const Mcs& mcs, int psdu_octets,
                       const OfdmConfig& cfg);

/// 64-point receive transform of one symbol body (no prefix), scaled so a
/// clean loopback returns the transmitted data vector.
std::vector<cdouble> rx_transform(const cdouble* block);

}  // namespace covertlink::ofdm
