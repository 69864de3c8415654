#include "covertlink/harness/iq_file.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace covertlink::sim {

using nlohmann::json;

void write_iq(const std::string& path, const ComplexBuffer& x, const IqSidecar& meta) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_iq: cannot open " + path);
    std::vector<float> buf(2 * x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        buf[2 * i] = static_cast<float>(x.samples[i].real());
        buf[2 * i + 1] = static_cast<float>(x.samples[i].imag());
    }
    f.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
    f.close();

    json j;
    j["sample_rate_hz"] = meta.sample_rate_hz;
    j["center_freq_hz"] = meta.center_freq_hz;
    j["description"] = meta.description;
    if (meta.packet_start) j["packet_start"] = *meta.packet_start;
    if (meta.mcs) j["mcs"] = *meta.mcs;
    if (meta.psdu_octets) j["psdu_octets"] = *meta.psdu_octets;
    if (meta.psdu_hex) j["psdu_hex"] = *meta.psdu_hex;
    if (meta.snr_db) j["snr_db"] = *meta.snr_db;
    if (meta.cfo_hz) j["cfo_hz"] = *meta.cfo_hz;
    if (meta.injected_sir_db) j["injected_sir_db"] = *meta.injected_sir_db;
    std::ofstream side(path + ".json");
    if (!side) throw std::runtime_error("write_iq: cannot open sidecar for " + path);
    side << j.dump(2) << '\n';
}

IqRecording read_iq(const std::string& path) {
    std::ifstream side(path + ".json");
    if (!side) throw std::runtime_error("read_iq: missing sidecar " + path + ".json");
    json j;
    side >> j;

    IqRecording rec;
    rec.meta.sample_rate_hz = j.at("sample_rate_hz").get<double>();
    rec.meta.center_freq_hz = j.value("center_freq_hz", 0.0);
    rec.meta.description = j.value("description", std::string());
    if (j.contains("packet_start")) rec.meta.packet_start = j["packet_start"].get<long>();
    if (j.contains("mcs")) rec.meta.mcs = j["mcs"].get<int>();
    if (j.contains("psdu_octets")) rec.meta.psdu_octets = j["psdu_octets"].get<int>();
    if (j.contains("psdu_hex")) rec.meta.psdu_hex = j["psdu_hex"].get<std::string>();
    if (j.contains("snr_db")) rec.meta.snr_db = j["snr_db"].get<double>();
    if (j.contains("cfo_hz")) rec.meta.cfo_hz = j["cfo_hz"].get<double>();
    if (j.contains("injected_sir_db"))
        rec.meta.injected_sir_db = j["injected_sir_db"].get<double>();

    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("read_iq: cannot open " + path);
    f.seekg(0, std::ios::end);
    const auto bytes = static_cast<std::size_t>(f.tellg());
    f.seekg(0);
    const std::size_t n = bytes / (2 * sizeof(float));
    std::vector<float> buf(2 * n);
    f.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(2 * n * sizeof(float)));

    rec.samples.sample_rate_hz = rec.meta.sample_rate_hz;
    rec.samples.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        rec.samples.samples[i] = cdouble(buf[2 * i], buf[2 * i + 1]);
    return rec;
}

std::vector<std::string> list_recordings(const std::string& dir) {
    std::vector<std::string> out;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (e.path().extension() == ".f32") out.push_back(e.path().string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string bytes_to_hex(const std::vector<std::uint8_t>& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(2 * bytes.size());
    for (auto b : bytes) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 0xf]);
    }
    return s;
}

std::vector<std::uint8_t> hex_to_bytes(const std::string& hex) {
    auto nib = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::invalid_argument("hex_to_bytes: bad digit");
    };
    if (hex.size() % 2 != 0) throw std::invalid_argument("hex_to_bytes: odd length");
    std::vector<std::uint8_t> out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<std::uint8_t>((nib(hex[2 * i]) << 4) | nib(hex[2 * i + 1]));
    return out;
}

}  // namespace covertlink::sim
