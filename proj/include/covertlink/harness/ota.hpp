#pragma once

#include <cstdint>
#include <string>

namespace covertlink::sim {

/// Synthetic stand-in for over-the-air captures: MCS 7 packets resampled to
/// 40 MSPS, passed through random multipath and CFO, padded with noise at a
/// 29-31 dB SNR. Sidecars carry the ground truth needed to score replays.
struct OtaSpec {
    std::string dir;
    int n_recordings = 60;
    int psdu_octets = 1000;
    int mcs = 7;
    double sample_rate_hz = 40e6;
    int pad_samples = 2048;  // leading noise at the recording rate, kept even
    double snr_db_lo = 29.0, snr_db_hi = 31.0;
    double cfo_hz_lo = -40e3, cfo_hz_hi = 40e3;
    int taps_lo = 2, taps_hi = 4;
    double tap_decay_db = 3.0;
};

/// Writes n_recordings .f32 files (plus sidecars) into spec.dir. Returns the
/// number written. Deterministic in (spec, seed).
int synth_ota_corpus(const OtaSpec& spec, std::uint64_t seed);

}  // namespace covertlink::sim
