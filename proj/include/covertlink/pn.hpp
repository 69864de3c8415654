#pragma once

#include <cstdint>
#include <vector>

namespace covertlink {

/// First n output bits of the Fibonacci LFSR for a degree-6 polynomial.
///
/// taps is the characteristic polynomial coefficient mask including the z^6
/// term, e.g. z^6+z+1 -> 0b1000011. The register is seeded with init_state
/// (bit i of init_state = stage i, stage 5 is the output stage), so the
/// state vector [0 0 0 0 0 1] is init_state = 0b100000... see lfsr_poly_z6_z_1.
/// Throws std::invalid_argument on an all-zero state.
std::vector<std::uint8_t> lfsr_sequence(std::uint32_t taps, std::uint32_t init_state, std::size_t n);

constexpr std::uint32_t lfsr_poly_z6_z_1 = 0b1000011;   // z^6 + z + 1
constexpr std::uint32_t lfsr_state_000001 = 0b100000;   // state vector [0 0 0 0 0 1]

/// +/-1 spreading code, 64 chips per covert symbol.
struct SpreadingCode {
    std::vector<int> chips;  // every entry +1 or -1
    std::size_t length() const { return chips.size(); }
};

/// The length-64 spreading code: 64 consecutive outputs of the z^6+z+1 LFSR
/// from state [0 0 0 0 0 1], mapped 0 -> +1, 1 -> -1. The m-sequence period
/// is 63, so chip 64 is the first output of the next period, which is the
/// same chip the periodic extension would pick. Aperiodic autocorrelation
/// peaks at 64 with largest sidelobe magnitude 6 (PSLR 20.56 dB).
SpreadingCode build_spreading_code();

/// Aperiodic autocorrelation of an integer chip sequence at all lags
/// -(n-1)..(n-1); result[k] is lag k-(n-1).
std::vector<double> aperiodic_autocorrelation(const std::vector<int>& chips);

/// Peak side-lobe ratio in dB: 20*log10(acf[0] / max_{lag != 0} |acf|).
double code_pslr_db(const SpreadingCode& code);

}  // namespace covertlink
