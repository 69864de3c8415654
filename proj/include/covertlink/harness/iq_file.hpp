#pragma once

#include <optional>
#include <string>
#include <vector>

#include "covertlink/complex_buffer.hpp"

namespace covertlink::sim {

/// IQ recording on disk: raw interleaved little-endian float32 (I, Q) pairs,
/// no header, plus a mandatory JSON sidecar `<name>.json`. The sidecar
/// always carries sample_rate_hz, center_freq_hz and description; synthetic
/// recordings add ground truth for scoring.
struct IqSidecar {
    double sample_rate_hz = 20e6;
    double center_freq_hz = 0.0;
    std::string description;
    // optional ground truth (synthetic corpora)
    std::optional<long> packet_start;       // at the sidecar's sample rate
    std::optional<int> mcs;
    std::optional<int> psdu_octets;
    std::optional<std::string> psdu_hex;
    std::optional<double> snr_db;
    std::optional<double> cfo_hz;
    std::optional<double> injected_sir_db;  // set by the inject tool
};

struct IqRecording {
    ComplexBuffer samples;
    IqSidecar meta;
};

void write_iq(const std::string& path, const ComplexBuffer& x, const IqSidecar& meta);
IqRecording read_iq(const std::string& path);

/// All "*.f32" recordings in a directory (sorted by name).
std::vector<std::string> list_recordings(const std::string& dir);

std::string bytes_to_hex(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> hex_to_bytes(const std::string& hex);

}  // namespace covertlink::sim
