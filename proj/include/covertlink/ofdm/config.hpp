#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace covertlink::ofdm {

/// Static numerology of the 20 MHz OFDM PHY: 64-point transform, 16-sample
/// cyclic prefix, 48 data + 4 pilot subcarriers, DC and band edges null.
struct OfdmConfig {
    int fft_size = 64;
    int cp_len = 16;
    double sample_rate_hz = 20e6;

    int symbol_len() const { return fft_size + cp_len; }          // 80 samples, 4 us
    int preamble_len() const { return 320; }                      // STF(160) + GI2+2xLTF(160)
    double symbol_duration_s() const { return symbol_len() / sample_rate_hz; }

    /// Data subcarriers in fill order (negative to positive, skipping pilots/DC).
    static const std::array<int, 48>& data_subcarriers();
    /// Pilot subcarriers {-21, -7, 7, 21} with base values {1, 1, 1, -1}.
    static const std::array<int, 4>& pilot_subcarriers();
    static const std::array<double, 4>& pilot_values();
    /// All occupied (data + pilot) subcarriers, ascending. 52 entries.
    static const std::array<int, 52>& occupied_subcarriers();

    /// Subcarrier index (-32..31) to FFT bin (0..63).
    static int bin_of(int subcarrier) { return (subcarrier + 64) % 64; }

    int packet_samples(int n_symbols) const { return preamble_len() + n_symbols * symbol_len(); }
};

enum class Constellation : std::uint8_t { BPSK, QPSK, QAM16, QAM64 };
enum class CodeRate : std::uint8_t { R1_2, R2_3, R3_4 };

/// Modulation and coding scheme, indices 0..7 per the 20 MHz OFDM rate table.
struct Mcs {
    int index = 0;
    Constellation constellation = Constellation::BPSK;
    CodeRate code_rate = CodeRate::R1_2;
    int nbpsc = 1;    // coded bits per subcarrier
    int ncbps = 48;   // coded bits per symbol
    int ndbps = 24;   // data bits per symbol

    static Mcs from_index(int idx);

    /// Payload symbols for a PSDU of n octets: SERVICE(16) + 8n + tail(6), padded.
    int symbols_for_psdu(int n_octets) const {
        const int bits = 16 + 8 * n_octets + 6;
        return (bits + ndbps - 1) / ndbps;
    }
};

/// SNR at the standard receiver minimum sensitivity level per MCS, assuming
/// the standard's 10 dB noise figure over a -101 dBm thermal floor in 20 MHz.
/// These are the 10%-PER operating points the baseline experiment checks.
inline constexpr std::array<double, 8> sensitivity_snr_db = {9, 10, 12, 14, 17, 21, 25, 26};

}  // namespace covertlink::ofdm
