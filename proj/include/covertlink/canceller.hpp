#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "covertlink/complex_buffer.hpp"
#include "covertlink/covert.hpp"
#include "covertlink/ofdm/receiver.hpp"
#include "covertlink/ofdm/transmitter.hpp"

namespace covertlink::cancel {

enum class Mode : std::uint8_t { Forward, Inverse };

struct CancellationReport {
    double suppression_db = 0.0;   // residue power vs received power over the window
    long ofdm_bit_errors = -1;     // -1 when no truth available
    double scale_applied = 1.0;
    double phase_applied = 0.0;
    Mode mode = Mode::Forward;
    bool used_fallback = false;    // sync failed, covert recovery ran on raw samples
    bool ofdm_packet_ok = false;
    double snr_est_db = 0.0;
};

/// The reconstructed interference: the remodulated packet passed through the
/// estimated channel (64-tap filter from the per-bin estimate, taps window
/// [-32, 31]), the estimated phase ramp, and the per-symbol pilot phases.
/// samples[i] lines up with r[start_in_r + i].
struct ImpairedModel {
    std::vector<cdouble> samples;
    std::ptrdiff_t start_in_r = 0;
};

ImpairedModel apply_estimated_impairments(const ComplexBuffer& s_hat,
                                          const ofdm::RxEstimates& est,
                                          const ofdm::OfdmConfig& cfg);

/// u = r - Lambda_hat H_hat s_hat. The received noise stays untouched.
/// Suppression is measured over [window_begin, window_begin + window_len)
/// in r coordinates (defaults to the model extent clipped to r).
std::pair<ComplexBuffer, CancellationReport> cancel_forward(
    const ComplexBuffer& r, const ofdm::RxEstimates& est, const ComplexBuffer& s_hat,
    const ofdm::OfdmConfig& cfg, std::ptrdiff_t window_begin = -1,
    std::ptrdiff_t window_len = -1);

/// u = H_hat^{-1} Lambda_hat^* r - s_hat, kept for comparison: the inverse
/// filter shapes the noise. Throws if any interpolated bin magnitude falls
/// below 1e-6 of the mean. The residue is aligned to the packet start (index
/// 0 = first preamble sample).
std::pair<ComplexBuffer, CancellationReport> cancel_inverse(
    const ComplexBuffer& r, const ofdm::RxEstimates& est, const ComplexBuffer& s_hat,
    const ofdm::OfdmConfig& cfg, std::ptrdiff_t window_begin = -1,
    std::ptrdiff_t window_len = -1);

/// Power match and mean-phase rotation between the received signal and the
/// reconstructed model: scale = sqrt(Pr/Pm), phase = arg(sum r conj(m)).
std::pair<double, double> refine_scale_phase(const std::vector<cdouble>& r_seg,
                                             const std::vector<cdouble>& model_seg);

struct RecoverOptions {
    std::optional<std::size_t> covert_start;            // absolute index in r (shared secret)
    std::optional<std::vector<std::uint8_t>> truth_psdu;
    std::ptrdiff_t fallback_packet_start = 0;           // used when sync fails
    bool refine = true;
};

struct RecoverResult {
    covert::DespreadResult despread;
    CancellationReport report;
    ofdm::DemodResult ofdm;
};

/// Full covert receiver: demodulate the OFDM packet, remodulate, re-apply
/// the estimated impairments, refine scale/phase, subtract, despread the
/// residue. If sync fails the despreader runs on the raw samples and the
/// report is flagged.
RecoverResult recover_covert(const ComplexBuffer& r, const ofdm::Mcs& mcs, int psdu_octets,
                             const ofdm::OfdmConfig& cfg, const covert::CovertConfig& ccfg,
                             int n_bits, const RecoverOptions& opts = {});

}  // namespace covertlink::cancel
