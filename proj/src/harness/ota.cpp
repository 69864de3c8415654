#include "covertlink/harness/ota.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>

#include "covertlink/channel.hpp"
#include "covertlink/harness/iq_file.hpp"
#include "covertlink/ofdm/bits.hpp"
#include "covertlink/ofdm/transmitter.hpp"
#include "covertlink/resample.hpp"
#include "covertlink/rng.hpp"

namespace covertlink::sim {

int synth_ota_corpus(const OtaSpec& spec, std::uint64_t seed) {
    std::filesystem::create_directories(spec.dir);
    const ofdm::OfdmConfig cfg;
    const auto mcs = ofdm::Mcs::from_index(spec.mcs);
    const int pad = spec.pad_samples & ~1;  // keep the packet start rate-convertible

    for (int i = 0; i < spec.n_recordings; ++i) {
        Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(i)));

        std::vector<std::uint8_t> psdu(spec.psdu_octets);
        for (auto& b : psdu) b = static_cast<std::uint8_t>(rng.below(256));
        ofdm::append_crc32(psdu);
        const auto seed7 = static_cast<std::uint8_t>(1 + rng.below(127));
        auto pkt = ofdm::modulate(psdu, mcs, cfg, seed7);

        auto up = resample(pkt.waveform, spec.sample_rate_hz);
        const double p_sig = up.mean_power();

        chan::ChannelRealization ch;
        const int n_taps = spec.taps_lo +
                           static_cast<int>(rng.below(spec.taps_hi - spec.taps_lo + 1));
        ch = chan::ChannelRealization::random_multipath(n_taps, spec.tap_decay_db, rng);
        const double cfo_hz = rng.uniform(spec.cfo_hz_lo, spec.cfo_hz_hi);
        ch.cfo_omega = 2.0 * std::numbers::pi * cfo_hz / spec.sample_rate_hz;
        ch.cfo_phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
        ch.timing_offset = pad;

        auto rec = chan::apply_channel(up, ch, rng);
        rec.samples.resize(rec.size() + pad, cdouble(0.0, 0.0));  // trailing pad
        const double snr_db = rng.uniform(spec.snr_db_lo, spec.snr_db_hi);
        chan::add_noise(rec.samples, 0, rec.size(), p_sig * std::pow(10.0, -snr_db / 10.0), rng);

        char name[64];
        std::snprintf(name, sizeof(name), "ota_%04d.f32", i);
        IqSidecar meta;
        meta.sample_rate_hz = spec.sample_rate_hz;
        meta.center_freq_hz = 2.412e9;  // informational
        meta.description = "synthetic ota-like capture";
        meta.packet_start = pad;
        meta.mcs = spec.mcs;
        meta.psdu_octets = spec.psdu_octets;
        meta.psdu_hex = bytes_to_hex(psdu);
        meta.snr_db = snr_db;
        meta.cfo_hz = cfo_hz;
        write_iq((std::filesystem::path(spec.dir) / name).string(), rec, meta);
    }
    return spec.n_recordings;
}

}  // namespace covertlink::sim
