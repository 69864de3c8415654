#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "covertlink/covert.hpp"
#include "covertlink/harness/experiment.hpp"
#include "covertlink/harness/iq_file.hpp"
#include "covertlink/harness/mask.hpp"
#include "covertlink/harness/ota.hpp"
#include "covertlink/harness/svg.hpp"
#include "covertlink/ofdm/bits.hpp"
#include "covertlink/ofdm/transmitter.hpp"
#include "covertlink/rng.hpp"

using namespace covertlink;
using namespace covertlink::sim;

namespace {

std::string tmpdir(const char* name) {
    auto p = std::filesystem::temp_directory_path() / name;
    std::filesystem::create_directories(p);
    return p.string();
}

ExperimentSpec tiny_nocancel_spec() {
    auto spec = ExperimentSpec::from_json_text(R"({
        "kind": "covert_ber_nocancel",
        "snr_db": [23],
        "sir_db": [6, 12],
        "packets_per_point": 6,
        "psdu_octets": 400,
        "seed": 77
    })");
    return spec;
}

}  // namespace

TEST_CASE("wilson interval behaves") {
    double lo1, hi1, lo2, hi2;
    wilson_interval(5, 100, lo1, hi1);
    CHECK(lo1 < 0.05);
    CHECK(hi1 > 0.05);
    wilson_interval(50, 1000, lo2, hi2);
    CHECK(hi2 - lo2 < hi1 - lo1);  // shrinks with trials
    wilson_interval(0, 100, lo1, hi1);
    CHECK(lo1 == 0.0);
    CHECK(hi1 > 0.0);
    CHECK(hi1 < 0.05);
}

TEST_CASE("experiment config: parsing, defaults, overrides, unknown keys") {
    auto spec = ExperimentSpec::from_json_text(R"({"kind": "per_vs_sir", "seed": 5})");
    CHECK(spec.kind == ExperimentKind::PerVsSir);
    CHECK(spec.snr_db.size() == 4);  // 21, 23, 25, no-noise
    CHECK(std::isinf(spec.snr_db.back()));
    CHECK(spec.sir_db.front() == 0.0);
    CHECK(spec.sir_db.back() == 45.0);
    CHECK(spec.name == "per_vs_sir");

    spec.apply_override("packets_per_point=50");
    CHECK(spec.packets_per_point == 50);
    spec.apply_override("channel.cfo_hz=40e3");
    CHECK(spec.channel.cfo_hz_hi == doctest::Approx(40e3));
    spec.apply_override("snr_db=[23]");
    CHECK(spec.snr_db.size() == 1);
    CHECK_THROWS(spec.apply_override("volume=11"));
    CHECK_THROWS(spec.apply_override("nonsense"));

    CHECK_THROWS(ExperimentSpec::from_json_text(R"({"kind": "nope"})"));
    CHECK_THROWS(ExperimentSpec::from_json_text(R"({"kind": "per_vs_sir", "frobnicate": 1})"));
    CHECK_THROWS(ExperimentSpec::from_json_text(
        R"({"kind": "per_vs_sir", "snr_db": [25, 21]})"));  // not increasing
    CHECK_THROWS(ExperimentSpec::from_json_text(
        R"({"kind": "per_vs_sir", "psdu_octets": 9999})"));
}

TEST_CASE("iq file round trip with sidecar") {
    Rng rng(1);
    ComplexBuffer x(777, 40e6);
    for (auto& v : x.samples) v = cdouble(rng.gauss(), rng.gauss());
    IqSidecar meta;
    meta.sample_rate_hz = 40e6;
    meta.center_freq_hz = 2.4e9;
    meta.description = "round trip";
    meta.packet_start = 123;
    meta.psdu_hex = "a1b2c3";

    const auto dir = tmpdir("covertlink_iq_test");
    const auto path = dir + "/x.f32";
    write_iq(path, x, meta);
    const auto rec = read_iq(path);
    REQUIRE(rec.samples.size() == x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(std::abs(rec.samples.samples[i] - x.samples[i]) < 1e-6);  // float32 storage
    CHECK(rec.meta.sample_rate_hz == 40e6);
    CHECK(rec.meta.packet_start.value() == 123);
    CHECK(rec.meta.psdu_hex.value() == "a1b2c3");
    CHECK(hex_to_bytes("a1b2c3") == std::vector<std::uint8_t>{0xa1, 0xb2, 0xc3});
    CHECK(bytes_to_hex({0xde, 0xad}) == "dead");
}

TEST_CASE("mask: clean packet passes, strong injection trips the dc check") {
    Rng rng(2);
    std::vector<std::uint8_t> psdu(600);
    for (auto& b : psdu) b = static_cast<std::uint8_t>(rng.below(256));
    ofdm::append_crc32(psdu);
    const auto pkt = ofdm::modulate(psdu, ofdm::Mcs::from_index(7), ofdm::OfdmConfig{});

    const auto clean = check_spectral_mask(pkt.waveform);
    CHECK(clean.pass);
    CHECK(clean.overall_margin_db > 0.0);
    CHECK(clean.dc_delta_db >= 30.0);  // transmitted packets keep the DC bin quiet

    covert::CovertConfig ccfg;
    auto strong = pkt.waveform;
    const int nb = covert::capacity_for_packet(strong.size(), ccfg);
    std::vector<std::uint8_t> cb(nb);
    for (auto& b : cb) b = static_cast<std::uint8_t>(rng.bit());
    covert::inject(strong, covert::covert_modulate(cb, ccfg), 0.0, ccfg.start_offset);
    const auto hot = check_spectral_mask(strong);
    CHECK_FALSE(hot.pass);
    CHECK(hot.dc_margin_db < 0.0);

    auto quiet = pkt.waveform;
    covert::inject(quiet, covert::covert_modulate(cb, ccfg), 35.0, ccfg.start_offset);
    const auto ok = check_spectral_mask(quiet);
    CHECK(ok.pass);
    CHECK(ok.overall_margin_db < clean.overall_margin_db);

    ComplexBuffer tiny(100, 20e6);
    CHECK_THROWS(check_spectral_mask(tiny));
}

TEST_CASE("covert ber experiment: determinism, conservation, order independence") {
    const auto spec = tiny_nocancel_spec();
    const auto res1 = run_experiment(spec);
    const auto res2 = run_experiment(spec);
    const auto csv1 = curves_to_csv(spec.name, res1.curves, spec.seed, true);
    const auto csv2 = curves_to_csv(spec.name, res2.curves, spec.seed, true);
    CHECK(csv1 == csv2);

    // capacity conservation: every packet contributes its full capacity
    covert::CovertConfig ccfg;
    const int n_sym = ofdm::Mcs::from_index(7).symbols_for_psdu(spec.psdu_octets);
    const int per_pkt =
        covert::capacity_for_packet(ofdm::OfdmConfig{}.packet_samples(n_sym), ccfg);
    CHECK(res1.total_covert_bits ==
          static_cast<long>(per_pkt) * spec.packets_per_point * 2 /* sir points */);

    // worker count must not change the aggregate
    setenv("COVERTLINK_THREADS", "1", 1);
    const auto res3 = run_experiment(spec);
    unsetenv("COVERTLINK_THREADS");
    CHECK(curves_to_csv(spec.name, res3.curves, spec.seed, true) == csv1);
}

TEST_CASE("seed changes the data, grids stay put") {
    auto spec = tiny_nocancel_spec();
    const auto a = run_experiment(spec);
    spec.seed = 78;
    const auto b = run_experiment(spec);
    CHECK(curves_to_csv("x", a.curves, 0, true) != curves_to_csv("x", b.curves, 0, true));
    CHECK(a.curves.size() == b.curves.size());
    CHECK(a.curves[0].points[0].x_db == b.curves[0].points[0].x_db);
}

TEST_CASE("write_outputs emits csv and svg, rejects empty results") {
    auto spec = tiny_nocancel_spec();
    spec.out_dir = tmpdir("covertlink_out_test");
    const auto res = run_experiment(spec);
    const auto paths = write_outputs(res, spec);
    REQUIRE(paths.size() >= 2);
    for (const auto& p : paths) CHECK(std::filesystem::exists(p));

    std::ifstream csv(paths[0]);
    std::string header;
    std::getline(csv, header);
    CHECK(header ==
          "experiment,mcs,snr_db,sir_db,trials,errors,rate,ci_lo,ci_hi,mean_suppression_db,seed");

    ExperimentResult empty;
    CHECK_THROWS(write_outputs(empty, spec));
}

TEST_CASE("ota corpus synthesis and replay smoke test") {
    OtaSpec ota;
    ota.dir = tmpdir("covertlink_ota_test");
    std::filesystem::remove_all(ota.dir);
    ota.n_recordings = 3;
    ota.psdu_octets = 400;
    CHECK(synth_ota_corpus(ota, 11) == 3);
    const auto files = list_recordings(ota.dir);
    REQUIRE(files.size() == 3);

    const auto rec = read_iq(files[0]);
    CHECK(rec.meta.sample_rate_hz == 40e6);
    CHECK(rec.meta.packet_start.has_value());
    CHECK(rec.meta.psdu_hex.has_value());
    CHECK(rec.samples.size() > 6000);

    auto spec = ExperimentSpec::from_json_text(R"({
        "kind": "ota_replay",
        "sir_db": [30],
        "seed": 12
    })");
    spec.ota = ota;
    const auto res = run_experiment(spec);
    REQUIRE(res.curves.size() == 2);
    CHECK(res.curves[0].label == "without cancellation");
    CHECK(res.curves[1].label == "with cancellation");
    CHECK(res.curves[1].points[0].trials > 0);
    CHECK(res.mean_suppression_db < -10.0);
    CHECK(res.packets.size() == 3);
    const auto pcsv = packets_to_csv(spec.name, res.packets, spec.seed);
    CHECK(pcsv.find("ota_replay") != std::string::npos);
}

TEST_CASE("mask_check experiment runs the sweep") {
    auto spec = ExperimentSpec::from_json_text(R"({
        "kind": "mask_check",
        "sir_db": [0, 35, "inf"],
        "psdu_octets": 300,
        "seed": 9
    })");
    const auto res = run_experiment(spec);
    REQUIRE(res.mask_reports.size() == 3);
    CHECK_FALSE(res.mask_reports[0].pass);  // SIR 0 is blatant
    CHECK(res.mask_reports[1].pass);
    CHECK(res.mask_reports[2].pass);
    CHECK(res.mask_reports[2].overall_margin_db > res.mask_reports[1].overall_margin_db);
}

TEST_CASE("svg renderer produces parseable deterministic output") {
    SvgSeries s;
    s.label = "curve";
    s.x = {0, 10, 20, 30};
    s.y = {0.5, 0.1, 1e-3, 1e-5};
    SvgOptions opts;
    opts.title = "test";
    opts.log_y = true;
    const auto svg1 = render_svg({s}, opts);
    const auto svg2 = render_svg({s}, opts);
    CHECK(svg1 == svg2);
    CHECK(svg1.find("<svg") == 0);
    CHECK(svg1.find("polyline") != std::string::npos);
    CHECK_THROWS(render_svg({}, opts));
}
