#include "covertlink/pn.hpp"

#include <cmath>
#include <stdexcept>

namespace covertlink {

std::vector<std::uint8_t> lfsr_sequence(std::uint32_t taps, std::uint32_t init_state, std::size_t n) {
    if (taps != lfsr_poly_z6_z_1)
        throw std::invalid_argument("lfsr_sequence: only z^6+z+1 is supported");
    if ((init_state & 0x3f) == 0)
        throw std::invalid_argument("lfsr_sequence: all-zero initial state is degenerate");
    if (n == 0)
        throw std::invalid_argument("lfsr_sequence: n must be >= 1");

    // Stages s0..s5, output from s5, recurrence y[n] = y[n-5] ^ y[n-6].
    std::uint32_t s = init_state & 0x3f;
    std::vector<std::uint8_t> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t s5 = (s >> 5) & 1;
        const std::uint32_t s4 = (s >> 4) & 1;
        out.push_back(static_cast<std::uint8_t>(s5));
        s = ((s << 1) | (s5 ^ s4)) & 0x3f;
    }
    return out;
}

SpreadingCode build_spreading_code() {
    const auto bits = lfsr_sequence(lfsr_poly_z6_z_1, lfsr_state_000001, 64);
    SpreadingCode code;
    code.chips.reserve(64);
    for (auto b : bits) code.chips.push_back(b ? -1 : +1);
    return code;
}

std::vector<double> aperiodic_autocorrelation(const std::vector<int>& chips) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(chips.size());
    std::vector<double> acf(2 * n - 1, 0.0);
    for (std::ptrdiff_t lag = -(n - 1); lag <= n - 1; ++lag) {
        double acc = 0.0;
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            const std::ptrdiff_t j = i + lag;
            if (j >= 0 && j < n) acc += chips[i] * chips[j];
        }
        acf[lag + n - 1] = acc;
    }
    return acf;
}

double code_pslr_db(const SpreadingCode& code) {
    const auto acf = aperiodic_autocorrelation(code.chips);
    const std::size_t zero = code.chips.size() - 1;
    const double main = acf[zero];
    double side = 0.0;
    for (std::size_t i = 0; i < acf.size(); ++i) {
        if (i == zero) continue;
        side = std::max(side, std::abs(acf[i]));
    }
    return 20.0 * std::log10(main / side);
}

}  // namespace covertlink
