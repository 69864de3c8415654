#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "covertlink/harness/curves.hpp"
#include "covertlink/harness/mask.hpp"
#include "covertlink/harness/ota.hpp"

namespace covertlink::sim {

enum class ExperimentKind {
    BaselinePer,
    PerVsSir,
    CovertBerNoCancel,
    CovertBerCancel,
    OtaReplay,
    MaskCheck,
};

/// Per-trial impairments for the simulated experiments. CFO is drawn
/// uniformly from the range; a single unit tap means no multipath.
struct ChannelProfile {
    double cfo_hz_lo = 0.0;
    double cfo_hz_hi = 0.0;
    int taps_lo = 1;
    int taps_hi = 1;
    double tap_decay_db = 3.0;
    int timing_offset = 0;
};

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::BaselinePer;
    std::string name;                 // output basename, defaults to the kind
    std::vector<int> mcs = {7};
    std::vector<double> snr_db;       // +inf entries mean no noise
    std::vector<double> sir_db;
    int packets_per_point = 200;
    int psdu_octets = 1000;
    std::uint64_t seed = 1;
    ChannelProfile channel;
    int covert_start_offset = 320;
    OtaSpec ota;
    MaskSpec mask;
    std::string out_dir = ".";

    static ExperimentSpec from_json_file(const std::string& path);
    static ExperimentSpec from_json_text(const std::string& text);
    /// dotted-path override, e.g. "packets_per_point=50" or
    /// "channel.cfo_hz_hi=40e3". Unknown keys are rejected.
    void apply_override(const std::string& key_eq_value);

    std::string kind_name() const;
};

struct ExperimentResult {
    std::vector<Curve> curves;
    std::vector<PacketReport> packets;   // cancellation experiments
    std::vector<MaskReport> mask_reports;
    std::vector<double> mask_sir;        // x values for mask_reports
    long detect_failures = 0;
    long total_covert_bits = 0;
    double mean_suppression_db = std::numeric_limits<double>::quiet_NaN();
};

ExperimentResult run_experiment(const ExperimentSpec& spec, bool verbose = false);

/// CSV (+ per-packet CSV where applicable) + one SVG per figure.
/// Returns the paths written. Byte-identical for identical (spec, seed).
std::vector<std::string> write_outputs(const ExperimentResult& result,
                                       const ExperimentSpec& spec);

}  // namespace covertlink::sim
