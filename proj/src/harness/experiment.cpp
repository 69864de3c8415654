#include "covertlink/harness/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "covertlink/canceller.hpp"
#include "covertlink/channel.hpp"
#include "covertlink/covert.hpp"
#include "covertlink/harness/iq_file.hpp"
#include "covertlink/harness/parallel.hpp"
#include "covertlink/harness/svg.hpp"
#include "covertlink/ofdm/bits.hpp"
#include "covertlink/ofdm/receiver.hpp"
#include "covertlink/ofdm/transmitter.hpp"
#include "covertlink/resample.hpp"
#include "covertlink/rng.hpp"

namespace covertlink::sim {

using nlohmann::json;

namespace {

constexpr int kPadFront = 100;
constexpr int kPadBack = 60;

std::vector<std::uint8_t> make_psdu(Rng& rng, int octets) {
    std::vector<std::uint8_t> psdu(octets);
    for (auto& b : psdu) b = static_cast<std::uint8_t>(rng.below(256));
    ofdm::append_crc32(psdu);
    return psdu;
}

std::uint64_t trial_key(std::size_t curve, std::size_t point, long trial) {
    return (static_cast<std::uint64_t>(curve * 4096 + point) << 24) ^
           static_cast<std::uint64_t>(trial);
}

chan::ChannelRealization draw_channel(const ChannelProfile& prof, double fs, Rng& rng) {
    chan::ChannelRealization ch;
    if (prof.taps_hi > 1) {
        const int n = prof.taps_lo + static_cast<int>(rng.below(prof.taps_hi - prof.taps_lo + 1));
        ch = chan::ChannelRealization::random_multipath(n, prof.tap_decay_db, rng);
    }
    if (prof.cfo_hz_lo != 0.0 || prof.cfo_hz_hi != 0.0) {
        const double f = rng.uniform(prof.cfo_hz_lo, prof.cfo_hz_hi);
        ch.cfo_omega = 2.0 * std::numbers::pi * f / fs;
        ch.cfo_phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    }
    ch.timing_offset = kPadFront + prof.timing_offset;
    return ch;
}

std::string snr_label(double snr_db) {
    if (std::isinf(snr_db)) return "no noise";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "SNR %g dB", snr_db);
    return buf;
}

struct CovertTrialOut {
    long bits = 0;
    long errors = 0;
    double suppression_db = 0.0;
    bool fallback = false;
    PacketReport report;
};

// ---- runners -------------------------------------------------------------

ExperimentResult run_baseline_per(const ExperimentSpec& spec, bool verbose) {
    const ofdm::OfdmConfig cfg;
    ExperimentResult out;
    for (std::size_t ci = 0; ci < spec.mcs.size(); ++ci) {
        const auto mcs = ofdm::Mcs::from_index(spec.mcs[ci]);
        Curve curve;
        curve.mcs = mcs.index;
        char lbl[16];
        std::snprintf(lbl, sizeof(lbl), "MCS %d", mcs.index);
        curve.label = lbl;
        for (std::size_t pi = 0; pi < spec.snr_db.size(); ++pi) {
            const double snr = spec.snr_db[pi];
            std::vector<std::uint8_t> errs(spec.packets_per_point, 0);
            parallel_for(spec.packets_per_point, [&](long t) {
                Rng rng(Rng::derive(spec.seed, trial_key(ci, pi, t)));
                const auto psdu = make_psdu(rng, spec.psdu_octets);
                const auto seed7 = static_cast<std::uint8_t>(1 + rng.below(127));
                const auto pkt = ofdm::modulate(psdu, mcs, cfg, seed7);
                const double p_sig = pkt.waveform.mean_power();

                ComplexBuffer r(kPadFront + pkt.waveform.size() + kPadBack, cfg.sample_rate_hz);
                std::copy(pkt.waveform.samples.begin(), pkt.waveform.samples.end(),
                          r.samples.begin() + kPadFront);
                if (!std::isinf(snr))
                    chan::add_noise(r.samples, 0, r.size(),
                                    p_sig * std::pow(10.0, -snr / 10.0), rng);
                const auto res = ofdm::demodulate(r, mcs, spec.psdu_octets, cfg);
                errs[t] = !(res.found && res.psdu == psdu);
            });
            long total = 0;
            for (auto e : errs) total += e;
            curve.points.push_back(make_point(snr, total, spec.packets_per_point));
            if (verbose)
                std::fprintf(stderr, "baseline mcs%d snr %.1f: per %.4f\n", mcs.index, snr,
                             curve.points.back().rate);
        }
        out.curves.push_back(std::move(curve));
    }
    return out;
}

ExperimentResult run_per_vs_sir(const ExperimentSpec& spec, bool verbose) {
    const ofdm::OfdmConfig cfg;
    covert::CovertConfig ccfg;
    ccfg.start_offset = spec.covert_start_offset;
    const auto mcs = ofdm::Mcs::from_index(spec.mcs.front());

    ExperimentResult out;
    for (std::size_t ci = 0; ci < spec.snr_db.size(); ++ci) {
        const double snr = spec.snr_db[ci];
        Curve curve;
        curve.mcs = mcs.index;
        curve.snr_db = snr;
        curve.label = snr_label(snr);
        for (std::size_t pi = 0; pi < spec.sir_db.size(); ++pi) {
            const double sir = spec.sir_db[pi];
            std::vector<std::uint8_t> errs(spec.packets_per_point, 0);
            parallel_for(spec.packets_per_point, [&](long t) {
                Rng rng(Rng::derive(spec.seed, trial_key(ci, pi, t)));
                const auto psdu = make_psdu(rng, spec.psdu_octets);
                const auto seed7 = static_cast<std::uint8_t>(1 + rng.below(127));
                const auto pkt = ofdm::modulate(psdu, mcs, cfg, seed7);
                const double p_sig = pkt.waveform.mean_power();

                ComplexBuffer r(kPadFront + pkt.waveform.size() + kPadBack, cfg.sample_rate_hz);
                std::copy(pkt.waveform.samples.begin(), pkt.waveform.samples.end(),
                          r.samples.begin() + kPadFront);

                const int n_bits = covert::capacity_for_packet(pkt.waveform.size(), ccfg);
                if (n_bits > 0 && !std::isinf(sir)) {
                    std::vector<std::uint8_t> cbits(n_bits);
                    for (auto& b : cbits) b = static_cast<std::uint8_t>(rng.bit());
                    const auto frame = covert::covert_modulate(cbits, ccfg);
                    covert::inject(r, frame, sir, kPadFront + ccfg.start_offset);
                }
                if (!std::isinf(snr))
                    chan::add_noise(r.samples, 0, r.size(),
                                    p_sig * std::pow(10.0, -snr / 10.0), rng);
                const auto res = ofdm::demodulate(r, mcs, spec.psdu_octets, cfg);
                errs[t] = !(res.found && res.psdu == psdu);
            });
            long total = 0;
            for (auto e : errs) total += e;
            curve.points.push_back(make_point(sir, total, spec.packets_per_point));
            if (verbose)
                std::fprintf(stderr, "per_vs_sir %s sir %.1f: per %.4f\n", curve.label.c_str(),
                             sir, curve.points.back().rate);
        }
        out.curves.push_back(std::move(curve));
    }
    return out;
}

ExperimentResult run_covert_ber(const ExperimentSpec& spec, bool with_cancel, bool verbose) {
    const ofdm::OfdmConfig cfg;
    covert::CovertConfig ccfg;
    ccfg.start_offset = spec.covert_start_offset;
    const auto mcs = ofdm::Mcs::from_index(spec.mcs.front());

    ExperimentResult out;
    double supp_sum = 0.0;
    long supp_n = 0;
    for (std::size_t ci = 0; ci < spec.snr_db.size(); ++ci) {
        const double snr = spec.snr_db[ci];
        Curve curve;
        curve.mcs = mcs.index;
        curve.snr_db = snr;
        curve.label = snr_label(snr);
        for (std::size_t pi = 0; pi < spec.sir_db.size(); ++pi) {
            const double sir = spec.sir_db[pi];
            std::vector<CovertTrialOut> trials(spec.packets_per_point);
            parallel_for(spec.packets_per_point, [&](long t) {
                Rng rng(Rng::derive(spec.seed, trial_key(ci, pi, t)));
                auto& tr = trials[t];

                const auto psdu = make_psdu(rng, spec.psdu_octets);
                const auto seed7 = static_cast<std::uint8_t>(1 + rng.below(127));
                const auto pkt = ofdm::modulate(psdu, mcs, cfg, seed7);
                const double p_sig = pkt.waveform.mean_power();

                const auto ch = draw_channel(spec.channel, cfg.sample_rate_hz, rng);
                auto r = chan::apply_channel(pkt.waveform, ch, rng);
                r.samples.resize(r.size() + kPadBack, cdouble(0.0, 0.0));

                const std::size_t ps_true = ch.timing_offset;
                const int n_bits = covert::capacity_for_packet(pkt.waveform.size(), ccfg);
                std::vector<std::uint8_t> cbits(std::max(n_bits, 0));
                for (auto& b : cbits) b = static_cast<std::uint8_t>(rng.bit());
                const std::size_t cstart = ps_true + ccfg.start_offset;
                if (n_bits > 0 && !std::isinf(sir)) {
                    const auto frame = covert::covert_modulate(cbits, ccfg);
                    covert::inject(r, frame, sir, cstart);
                }
                if (!std::isinf(snr))
                    chan::add_noise(r.samples, 0, r.size(),
                                    p_sig * std::pow(10.0, -snr / 10.0), rng);
                if (n_bits <= 0) return;

                if (!with_cancel) {
                    const auto des = covert::covert_demodulate(r, ccfg, n_bits, cstart);
                    tr.bits = n_bits;
                    for (int b = 0; b < n_bits; ++b) tr.errors += des.bits[b] != cbits[b];
                    return;
                }

                cancel::RecoverOptions opts;
                opts.covert_start = cstart;
                opts.truth_psdu = psdu;
                opts.fallback_packet_start = static_cast<std::ptrdiff_t>(ps_true);
                const auto rec = cancel::recover_covert(r, mcs, spec.psdu_octets, cfg, ccfg,
                                                        n_bits, opts);
                tr.fallback = rec.report.used_fallback;
                tr.report.sir_db = sir;
                tr.report.snr_db = snr;
                tr.report.suppression_db = rec.report.suppression_db;
                tr.report.scale = rec.report.scale_applied;
                tr.report.phase = rec.report.phase_applied;
                tr.report.ofdm_bit_errors = rec.report.ofdm_bit_errors;
                tr.report.packet_ok = rec.report.ofdm_packet_ok;
                tr.report.used_fallback = rec.report.used_fallback;
                if (!tr.fallback) {
                    tr.bits = static_cast<long>(rec.despread.bits.size());
                    for (std::size_t b = 0; b < rec.despread.bits.size(); ++b)
                        tr.errors += rec.despread.bits[b] != cbits[b];
                    tr.suppression_db = rec.report.suppression_db;
                }
                tr.report.covert_bits = tr.bits;
                tr.report.covert_errors = tr.errors;
            });

            long bits = 0, errors = 0, fallbacks = 0;
            double supp = 0.0;
            long nsupp = 0;
            for (long t = 0; t < spec.packets_per_point; ++t) {
                const auto& tr = trials[t];
                bits += tr.bits;
                errors += tr.errors;
                fallbacks += tr.fallback;
                if (with_cancel && !tr.fallback) {
                    supp += tr.suppression_db;
                    ++nsupp;
                }
                if (with_cancel) {
                    auto rep = tr.report;
                    rep.index = static_cast<long>(out.packets.size());
                    out.packets.push_back(rep);
                }
            }
            out.detect_failures += fallbacks;
            out.total_covert_bits += bits;
            auto pt = make_point(sir, errors, bits);
            if (with_cancel && nsupp > 0) {
                pt.mean_suppression_db = supp / static_cast<double>(nsupp);
                supp_sum += supp;
                supp_n += nsupp;
            }
            curve.points.push_back(pt);
            if (verbose)
                std::fprintf(stderr, "covert_ber%s %s sir %.1f: ber %.3g (%ld/%ld) supp %.1f\n",
                             with_cancel ? "_cancel" : "", curve.label.c_str(), sir,
                             curve.points.back().rate, errors, bits,
                             curve.points.back().mean_suppression_db);
        }
        out.curves.push_back(std::move(curve));
    }
    if (supp_n > 0) out.mean_suppression_db = supp_sum / static_cast<double>(supp_n);
    return out;
}

ExperimentResult run_ota_replay(const ExperimentSpec& spec, bool verbose) {
    const ofdm::OfdmConfig cfg;
    covert::CovertConfig ccfg;
    ccfg.start_offset = spec.covert_start_offset;

    OtaSpec ota = spec.ota;
    if (ota.dir.empty()) ota.dir = spec.out_dir + "/ota_corpus";
    auto files = std::filesystem::exists(ota.dir) ? list_recordings(ota.dir)
                                                  : std::vector<std::string>{};
    if (files.empty()) {
        if (verbose) std::fprintf(stderr, "ota_replay: synthesizing corpus in %s\n", ota.dir.c_str());
        synth_ota_corpus(ota, spec.seed);
        files = list_recordings(ota.dir);
    }
    if (files.empty()) throw std::runtime_error("ota_replay: no recordings found");

    struct Loaded {
        ComplexBuffer buf;
        long ps20 = 0;
        int mcs = 7;
        int octets = 1000;
        std::vector<std::uint8_t> psdu;
        double snr_db = 0.0;
        bool usable = false;
    };
    std::vector<Loaded> recs(files.size());
    long skipped = 0;
    for (std::size_t i = 0; i < files.size(); ++i) {
        auto rec = read_iq(files[i]);
        auto& L = recs[i];
        if (rec.samples.empty() || !rec.meta.packet_start || !rec.meta.psdu_hex) {
            ++skipped;
            continue;
        }
        const double ratio = 20e6 / rec.meta.sample_rate_hz;
        L.buf = (rec.meta.sample_rate_hz == 20e6) ? std::move(rec.samples)
                                                  : resample(rec.samples, 20e6);
        L.ps20 = static_cast<long>(std::lround(*rec.meta.packet_start * ratio));
        L.mcs = rec.meta.mcs.value_or(7);
        L.octets = rec.meta.psdu_octets.value_or(1000);
        L.psdu = hex_to_bytes(*rec.meta.psdu_hex);
        L.snr_db = rec.meta.snr_db.value_or(30.0);
        L.usable = true;
    }

    ExperimentResult out;
    out.detect_failures = skipped;
    Curve c_with, c_without;
    c_with.label = "with cancellation";
    c_without.label = "without cancellation";
    c_with.mcs = c_without.mcs = recs.empty() ? 7 : recs.front().mcs;

    double supp_sum = 0.0;
    long supp_n = 0;
    for (std::size_t pi = 0; pi < spec.sir_db.size(); ++pi) {
        const double sir = spec.sir_db[pi];
        const long n = static_cast<long>(recs.size());
        std::vector<CovertTrialOut> with(n), without(n);
        parallel_for(n, [&](long i) {
            const auto& L = recs[i];
            if (!L.usable) return;
            Rng rng(Rng::derive(spec.seed, trial_key(0, pi, i)));
            const auto mcs = ofdm::Mcs::from_index(L.mcs);

            const int pkt_samples = cfg.packet_samples(mcs.symbols_for_psdu(L.octets));
            const int n_bits = covert::capacity_for_packet(pkt_samples, ccfg);
            if (n_bits <= 0) return;
            std::vector<std::uint8_t> cbits(n_bits);
            for (auto& b : cbits) b = static_cast<std::uint8_t>(rng.bit());

            ComplexBuffer r = L.buf;
            const std::size_t cstart = static_cast<std::size_t>(L.ps20) + ccfg.start_offset;
            const auto frame = covert::covert_modulate(cbits, ccfg);
            covert::inject(r, frame, sir, cstart);

            {
                const auto des = covert::covert_demodulate(r, ccfg, n_bits, cstart);
                without[i].bits = n_bits;
                for (int b = 0; b < n_bits; ++b) without[i].errors += des.bits[b] != cbits[b];
            }
            cancel::RecoverOptions opts;
            opts.covert_start = cstart;
            opts.truth_psdu = L.psdu;
            opts.fallback_packet_start = L.ps20;
            const auto rec = cancel::recover_covert(r, mcs, L.octets, cfg, ccfg, n_bits, opts);
            auto& tr = with[i];
            tr.fallback = rec.report.used_fallback;
            tr.report.sir_db = sir;
            tr.report.snr_db = L.snr_db;
            tr.report.suppression_db = rec.report.suppression_db;
            tr.report.scale = rec.report.scale_applied;
            tr.report.phase = rec.report.phase_applied;
            tr.report.ofdm_bit_errors = rec.report.ofdm_bit_errors;
            tr.report.packet_ok = rec.report.ofdm_packet_ok;
            tr.report.used_fallback = tr.fallback;
            if (!tr.fallback) {
                tr.bits = static_cast<long>(rec.despread.bits.size());
                for (std::size_t b = 0; b < rec.despread.bits.size(); ++b)
                    tr.errors += rec.despread.bits[b] != cbits[b];
                tr.suppression_db = rec.report.suppression_db;
            }
            tr.report.covert_bits = tr.bits;
            tr.report.covert_errors = tr.errors;
        });

        long wbits = 0, werr = 0, obits = 0, oerr = 0, fallbacks = 0;
        double supp = 0.0;
        long nsupp = 0;
        for (long i = 0; i < n; ++i) {
            if (!recs[i].usable) continue;
            wbits += with[i].bits;
            werr += with[i].errors;
            obits += without[i].bits;
            oerr += without[i].errors;
            fallbacks += with[i].fallback;
            if (!with[i].fallback) {
                supp += with[i].suppression_db;
                ++nsupp;
            }
            auto rep = with[i].report;
            rep.index = static_cast<long>(out.packets.size());
            out.packets.push_back(rep);
        }
        out.detect_failures += fallbacks;
        out.total_covert_bits += wbits + obits;
        auto ptw = make_point(sir, werr, wbits);
        if (nsupp > 0) {
            ptw.mean_suppression_db = supp / static_cast<double>(nsupp);
            supp_sum += supp;
            supp_n += nsupp;
        }
        c_with.points.push_back(ptw);
        c_without.points.push_back(make_point(sir, oerr, obits));
        if (verbose)
            std::fprintf(stderr, "ota sir %.1f: ber %.3g -> %.3g supp %.1f fb %ld\n", sir,
                         c_without.points.back().rate, c_with.points.back().rate,
                         ptw.mean_suppression_db, fallbacks);
    }
    if (supp_n > 0) out.mean_suppression_db = supp_sum / static_cast<double>(supp_n);
    out.curves.push_back(std::move(c_without));
    out.curves.push_back(std::move(c_with));
    return out;
}

ExperimentResult run_mask_check(const ExperimentSpec& spec, bool verbose) {
    const ofdm::OfdmConfig cfg;
    covert::CovertConfig ccfg;
    ccfg.start_offset = spec.covert_start_offset;
    const auto mcs = ofdm::Mcs::from_index(spec.mcs.front());

    Rng rng(Rng::derive(spec.seed, 0));
    const auto psdu = make_psdu(rng, spec.psdu_octets);
    const auto pkt = ofdm::modulate(psdu, mcs, cfg);

    ExperimentResult out;
    Curve curve;
    curve.mcs = mcs.index;
    curve.label = "mask margin";
    for (double sir : spec.sir_db) {
        ComplexBuffer x = pkt.waveform;
        if (!std::isinf(sir)) {
            const int n_bits = covert::capacity_for_packet(x.size(), ccfg);
            std::vector<std::uint8_t> cbits(n_bits);
            for (auto& b : cbits) b = static_cast<std::uint8_t>(rng.bit());
            covert::inject(x, covert::covert_modulate(cbits, ccfg), sir, ccfg.start_offset);
        }
        const auto rep = check_spectral_mask(x, spec.mask);
        out.mask_reports.push_back(rep);
        out.mask_sir.push_back(sir);
        auto pt = make_point(sir, rep.pass ? 0 : 1, 1);
        pt.mean_suppression_db = rep.overall_margin_db;
        curve.points.push_back(pt);
        if (verbose)
            std::fprintf(stderr, "mask sir %s: %s margin %.2f dB dc %.2f dB\n",
                         fmt_double(sir).c_str(), rep.pass ? "pass" : "FAIL",
                         rep.overall_margin_db, rep.dc_delta_db);
    }
    out.curves.push_back(std::move(curve));
    return out;
}

}  // namespace

// ---- spec parsing --------------------------------------------------------

namespace {

ExperimentKind kind_from_string(const std::string& s) {
    if (s == "baseline_per") return ExperimentKind::BaselinePer;
    if (s == "per_vs_sir") return ExperimentKind::PerVsSir;
    if (s == "covert_ber_nocancel") return ExperimentKind::CovertBerNoCancel;
    if (s == "covert_ber_cancel") return ExperimentKind::CovertBerCancel;
    if (s == "ota_replay") return ExperimentKind::OtaReplay;
    if (s == "mask_check") return ExperimentKind::MaskCheck;
    throw std::invalid_argument("unknown experiment kind: " + s);
}

double parse_snr_entry(const json& v) {
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf" || s == "none" || s == "no_noise")
            return std::numeric_limits<double>::infinity();
        throw std::invalid_argument("bad snr entry: " + s);
    }
    return v.get<double>();
}

std::vector<double> parse_db_list(const json& v) {
    std::vector<double> out;
    if (v.is_array())
        for (const auto& e : v) out.push_back(parse_snr_entry(e));
    else
        out.push_back(parse_snr_entry(v));
    if (out.empty()) throw std::invalid_argument("empty dB grid");
    for (std::size_t i = 1; i < out.size(); ++i)
        if (!(out[i] > out[i - 1]) && !std::isinf(out[i - 1]))
            throw std::invalid_argument("dB grid must be strictly increasing");
    return out;
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
    for (const auto& [k, v] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (k == a) { ok = true; break; }
        if (!ok) throw std::invalid_argument("unknown key '" + k + "' in " + where);
    }
}

void parse_channel(const json& j, ChannelProfile& ch) {
    check_keys(j, {"cfo_hz", "cfo_hz_lo", "cfo_hz_hi", "taps_lo", "taps_hi", "tap_decay_db",
                   "timing_offset"},
               "channel");
    if (j.contains("cfo_hz")) {
        const double f = j["cfo_hz"].get<double>();
        ch.cfo_hz_lo = -std::abs(f);
        ch.cfo_hz_hi = std::abs(f);
    }
    if (j.contains("cfo_hz_lo")) ch.cfo_hz_lo = j["cfo_hz_lo"].get<double>();
    if (j.contains("cfo_hz_hi")) ch.cfo_hz_hi = j["cfo_hz_hi"].get<double>();
    if (j.contains("taps_lo")) ch.taps_lo = j["taps_lo"].get<int>();
    if (j.contains("taps_hi")) ch.taps_hi = j["taps_hi"].get<int>();
    if (j.contains("tap_decay_db")) ch.tap_decay_db = j["tap_decay_db"].get<double>();
    if (j.contains("timing_offset")) ch.timing_offset = j["timing_offset"].get<int>();
}

void parse_ota(const json& j, OtaSpec& o) {
    check_keys(j, {"dir", "n_recordings", "psdu_octets", "mcs", "sample_rate_hz", "pad_samples",
                   "snr_db_lo", "snr_db_hi", "cfo_hz_lo", "cfo_hz_hi", "taps_lo", "taps_hi",
                   "tap_decay_db"},
               "ota");
    if (j.contains("dir")) o.dir = j["dir"].get<std::string>();
    if (j.contains("n_recordings")) o.n_recordings = j["n_recordings"].get<int>();
    if (j.contains("psdu_octets")) o.psdu_octets = j["psdu_octets"].get<int>();
    if (j.contains("mcs")) o.mcs = j["mcs"].get<int>();
    if (j.contains("sample_rate_hz")) o.sample_rate_hz = j["sample_rate_hz"].get<double>();
    if (j.contains("pad_samples")) o.pad_samples = j["pad_samples"].get<int>();
    if (j.contains("snr_db_lo")) o.snr_db_lo = j["snr_db_lo"].get<double>();
    if (j.contains("snr_db_hi")) o.snr_db_hi = j["snr_db_hi"].get<double>();
    if (j.contains("cfo_hz_lo")) o.cfo_hz_lo = j["cfo_hz_lo"].get<double>();
    if (j.contains("cfo_hz_hi")) o.cfo_hz_hi = j["cfo_hz_hi"].get<double>();
    if (j.contains("taps_lo")) o.taps_lo = j["taps_lo"].get<int>();
    if (j.contains("taps_hi")) o.taps_hi = j["taps_hi"].get<int>();
    if (j.contains("tap_decay_db")) o.tap_decay_db = j["tap_decay_db"].get<double>();
}

void parse_mask(const json& j, MaskSpec& m) {
    check_keys(j, {"breakpoints", "dc_clearance_db", "nfft"}, "mask");
    if (j.contains("breakpoints")) {
        m.breakpoints.clear();
        for (const auto& bp : j["breakpoints"])
            m.breakpoints.emplace_back(bp.at(0).get<double>(), bp.at(1).get<double>());
    }
    if (j.contains("dc_clearance_db")) m.dc_clearance_db = j["dc_clearance_db"].get<double>();
    if (j.contains("nfft")) m.nfft = j["nfft"].get<std::size_t>();
}

void apply_kind_defaults(ExperimentSpec& s) {
    const auto grid = [](double lo, double hi, double step) {
        std::vector<double> g;
        for (double v = lo; v <= hi + 1e-9; v += step) g.push_back(v);
        return g;
    };
    const double inf = std::numeric_limits<double>::infinity();
    switch (s.kind) {
        case ExperimentKind::BaselinePer:
            if (s.mcs.empty()) s.mcs = {0, 7};
            if (s.snr_db.empty()) s.snr_db = grid(0.0, 26.0, 2.0);
            break;
        case ExperimentKind::PerVsSir:
        case ExperimentKind::CovertBerNoCancel:
            if (s.snr_db.empty()) s.snr_db = {21.0, 23.0, 25.0, inf};
            if (s.sir_db.empty()) s.sir_db = grid(0.0, 45.0, 5.0);
            break;
        case ExperimentKind::CovertBerCancel:
            if (s.snr_db.empty()) s.snr_db = {23.0};
            if (s.sir_db.empty()) s.sir_db = {12, 15, 18, 21, 24, 27, 30, 35, 40, 45};
            break;
        case ExperimentKind::OtaReplay:
            if (s.sir_db.empty()) s.sir_db = grid(10.0, 45.0, 5.0);
            break;
        case ExperimentKind::MaskCheck:
            if (s.sir_db.empty()) s.sir_db = {0.0, 30.0, 35.0, inf};
            break;
    }
    if (s.name.empty()) s.name = s.kind_name();
}

ExperimentSpec spec_from_json(const json& j) {
    check_keys(j,
               {"kind", "name", "mcs", "snr_db", "sir_db", "packets_per_point", "psdu_octets",
                "seed", "channel", "covert_start_offset", "ota", "mask", "out_dir"},
               "experiment");
    ExperimentSpec s;
    s.kind = kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("name")) s.name = j["name"].get<std::string>();
    if (j.contains("mcs")) {
        s.mcs.clear();
        if (j["mcs"].is_array())
            for (const auto& m : j["mcs"]) s.mcs.push_back(m.get<int>());
        else
            s.mcs.push_back(j["mcs"].get<int>());
    }
    if (j.contains("snr_db")) s.snr_db = parse_db_list(j["snr_db"]);
    if (j.contains("sir_db")) s.sir_db = parse_db_list(j["sir_db"]);
    if (j.contains("packets_per_point")) s.packets_per_point = j["packets_per_point"].get<int>();
    if (j.contains("psdu_octets")) s.psdu_octets = j["psdu_octets"].get<int>();
    if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("covert_start_offset"))
        s.covert_start_offset = j["covert_start_offset"].get<int>();
    if (j.contains("out_dir")) s.out_dir = j["out_dir"].get<std::string>();
    if (j.contains("channel")) parse_channel(j["channel"], s.channel);
    if (j.contains("ota")) parse_ota(j["ota"], s.ota);
    if (j.contains("mask")) parse_mask(j["mask"], s.mask);
    if (s.packets_per_point < 1) throw std::invalid_argument("packets_per_point must be >= 1");
    if (s.psdu_octets < 5 || s.psdu_octets > 4095)
        throw std::invalid_argument("psdu_octets must be in 5..4095");
    apply_kind_defaults(s);
    return s;
}

}  // namespace

ExperimentSpec ExperimentSpec::from_json_text(const std::string& text) {
    return spec_from_json(json::parse(text));
}

ExperimentSpec ExperimentSpec::from_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open config: " + path);
    json j;
    f >> j;
    return spec_from_json(j);
}

void ExperimentSpec::apply_override(const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("override must be key=value: " + kv);
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    json v;
    try {
        v = json::parse(value);
    } catch (...) {
        v = value;  // bare string
    }

    auto as_db_list = [&] { return parse_db_list(v); };
    if (key == "name") name = v.get<std::string>();
    else if (key == "mcs") {
        mcs.clear();
        if (v.is_array())
            for (const auto& m : v) mcs.push_back(m.get<int>());
        else
            mcs.push_back(v.get<int>());
    } else if (key == "snr_db") snr_db = as_db_list();
    else if (key == "sir_db") sir_db = as_db_list();
    else if (key == "packets_per_point") packets_per_point = v.get<int>();
    else if (key == "psdu_octets") psdu_octets = v.get<int>();
    else if (key == "seed") seed = v.get<std::uint64_t>();
    else if (key == "covert_start_offset") covert_start_offset = v.get<int>();
    else if (key == "out_dir") out_dir = v.get<std::string>();
    else if (key == "channel.cfo_hz") {
        channel.cfo_hz_lo = -std::abs(v.get<double>());
        channel.cfo_hz_hi = std::abs(v.get<double>());
    } else if (key == "channel.cfo_hz_lo") channel.cfo_hz_lo = v.get<double>();
    else if (key == "channel.cfo_hz_hi") channel.cfo_hz_hi = v.get<double>();
    else if (key == "channel.taps_lo") channel.taps_lo = v.get<int>();
    else if (key == "channel.taps_hi") channel.taps_hi = v.get<int>();
    else if (key == "channel.tap_decay_db") channel.tap_decay_db = v.get<double>();
    else if (key == "channel.timing_offset") channel.timing_offset = v.get<int>();
    else if (key == "ota.dir") ota.dir = v.get<std::string>();
    else if (key == "ota.n_recordings") ota.n_recordings = v.get<int>();
    else if (key == "ota.psdu_octets") ota.psdu_octets = v.get<int>();
    else if (key == "ota.pad_samples") ota.pad_samples = v.get<int>();
    else if (key == "mask.dc_clearance_db") mask.dc_clearance_db = v.get<double>();
    else if (key == "mask.nfft") mask.nfft = v.get<std::size_t>();
    else throw std::invalid_argument("unknown override key: " + key);
}

std::string ExperimentSpec::kind_name() const {
    switch (kind) {
        case ExperimentKind::BaselinePer: return "baseline_per";
        case ExperimentKind::PerVsSir: return "per_vs_sir";
        case ExperimentKind::CovertBerNoCancel: return "covert_ber_nocancel";
        case ExperimentKind::CovertBerCancel: return "covert_ber_cancel";
        case ExperimentKind::OtaReplay: return "ota_replay";
        case ExperimentKind::MaskCheck: return "mask_check";
    }
    return "unknown";
}

ExperimentResult run_experiment(const ExperimentSpec& spec, bool verbose) {
    switch (spec.kind) {
        case ExperimentKind::BaselinePer: return run_baseline_per(spec, verbose);
        case ExperimentKind::PerVsSir: return run_per_vs_sir(spec, verbose);
        case ExperimentKind::CovertBerNoCancel: return run_covert_ber(spec, false, verbose);
        case ExperimentKind::CovertBerCancel: return run_covert_ber(spec, true, verbose);
        case ExperimentKind::OtaReplay: return run_ota_replay(spec, verbose);
        case ExperimentKind::MaskCheck: return run_mask_check(spec, verbose);
    }
    throw std::logic_error("run_experiment: bad kind");
}

std::vector<std::string> write_outputs(const ExperimentResult& result,
                                       const ExperimentSpec& spec) {
    if (result.curves.empty()) throw std::runtime_error("write_outputs: empty curve set");
    std::filesystem::create_directories(spec.out_dir);
    std::vector<std::string> paths;
    const std::string base = spec.out_dir + "/" + spec.name;

    const bool x_is_sir = spec.kind != ExperimentKind::BaselinePer;
    {
        std::ofstream f(base + ".csv", std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + base + ".csv");
        f << curves_to_csv(spec.name, result.curves, spec.seed, x_is_sir);
        paths.push_back(base + ".csv");
    }
    if (!result.packets.empty()) {
        std::ofstream f(base + "_packets.csv", std::ios::binary);
        f << packets_to_csv(spec.name, result.packets, spec.seed);
        paths.push_back(base + "_packets.csv");
    }

    SvgOptions opts;
    opts.title = spec.name;
    opts.log_y = true;
    std::vector<SvgSeries> series;
    if (spec.kind == ExperimentKind::MaskCheck) {
        // margin vs SIR, linear
        opts.log_y = false;
        opts.xlabel = "SIR (dB)";
        opts.ylabel = "overall margin (dB)";
        SvgSeries s;
        s.label = "margin";
        for (const auto& p : result.curves.front().points) {
            if (std::isinf(p.x_db)) continue;
            s.x.push_back(p.x_db);
            s.y.push_back(p.mean_suppression_db);
        }
        if (!s.x.empty()) series.push_back(std::move(s));
    } else {
        opts.xlabel = x_is_sir ? "SIR (dB)" : "SNR (dB)";
        opts.ylabel = spec.kind == ExperimentKind::BaselinePer ||
                              spec.kind == ExperimentKind::PerVsSir
                          ? "PER"
                          : "BER";
        for (const auto& c : result.curves) {
            SvgSeries s;
            s.label = c.label;
            for (const auto& p : c.points) {
                if (std::isinf(p.x_db)) continue;
                s.x.push_back(p.x_db);
                s.y.push_back(p.rate);
            }
            if (!s.x.empty()) series.push_back(std::move(s));
        }
    }
    if (!series.empty()) {
        write_svg(base + ".svg", series, opts);
        paths.push_back(base + ".svg");
    }
    return paths;
}

}  // namespace covertlink::sim
