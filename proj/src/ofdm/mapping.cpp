#include "covertlink/ofdm/mapping.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace covertlink::ofdm {

namespace {

// Per-axis Gray PAM levels indexed by the axis bit group (MSB first).
constexpr std::array<double, 2> kPam2 = {-1.0, 1.0};                       // bit: 0,1
constexpr std::array<double, 4> kPam4 = {-3.0, -1.0, 3.0, 1.0};            // b0b1: 00,01,10,11
constexpr std::array<double, 8> kPam8 = {-7.0, -5.0, -1.0, -3.0,
                                         7.0,  5.0,  1.0,  3.0};           // b0b1b2
constexpr double kModBpsk = 1.0;
constexpr double kModQpsk = 0.70710678118654752440;
constexpr double kMod16 = 0.31622776601683794;   // 1/sqrt(10)
constexpr double kMod64 = 0.15430334996209191;   // 1/sqrt(42)

int axis_index(const std::uint8_t* bits, int n) {
    int v = 0;
    for (int i = 0; i < n; ++i) v = (v << 1) | (bits[i] & 1);
    return v;
}

// max-log LLRs over one PAM axis: nb bits, levels[] indexed by bit group
template <std::size_t N>
void axis_llrs(double y, const std::array<double, N>& levels, double kmod, int nb, double csi,
               float* out) {
    std::array<double, N> d2;
    for (std::size_t i = 0; i < N; ++i) {
        const double d = y - levels[i] * kmod;
        d2[i] = d * d;
    }
    for (int b = 0; b < nb; ++b) {
        double best0 = std::numeric_limits<double>::max();
        double best1 = best0;
        const int mask = 1 << (nb - 1 - b);
        for (std::size_t i = 0; i < N; ++i) {
            if (static_cast<int>(i) & mask)
                best1 = std::min(best1, d2[i]);
            else
                best0 = std::min(best0, d2[i]);
        }
        out[b] = static_cast<float>((best1 - best0) * csi);
    }
}

}  // namespace

cdouble map_symbol(const std::uint8_t* bits, int nbpsc) {
    switch (nbpsc) {
        case 1:
            return cdouble(kPam2[bits[0]] * kModBpsk, 0.0);
        case 2:
            return cdouble(kPam2[bits[0]], kPam2[bits[1]]) * kModQpsk;
        case 4:
            return cdouble(kPam4[axis_index(bits, 2)], kPam4[axis_index(bits + 2, 2)]) * kMod16;
        case 6:
            return cdouble(kPam8[axis_index(bits, 3)], kPam8[axis_index(bits + 3, 3)]) * kMod64;
        default:
            throw std::invalid_argument("map_symbol: bad nbpsc");
    }
}

void demap_soft(cdouble y, int nbpsc, double csi, float* llr) {
    switch (nbpsc) {
        case 1:
            axis_llrs(y.real(), kPam2, kModBpsk, 1, csi, llr);
            break;
        case 2:
            axis_llrs(y.real(), kPam2, kModQpsk, 1, csi, llr);
            axis_llrs(y.imag(), kPam2, kModQpsk, 1, csi, llr + 1);
            break;
        case 4:
            axis_llrs(y.real(), kPam4, kMod16, 2, csi, llr);
            axis_llrs(y.imag(), kPam4, kMod16, 2, csi, llr + 2);
            break;
        case 6:
            axis_llrs(y.real(), kPam8, kMod64, 3, csi, llr);
            axis_llrs(y.imag(), kPam8, kMod64, 3, csi, llr + 3);
            break;
        default:
            throw std::invalid_argument("demap_soft: bad nbpsc");
    }
}

void demap_hard(cdouble y, int nbpsc, std::uint8_t* bits) {
    float llr[6];
    demap_soft(y, nbpsc, 1.0, llr);
    for (int b = 0; b < nbpsc; ++b) bits[b] = llr[b] < 0.0f ? 1 : 0;
}

}  // namespace covertlink::ofdm
