#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "linksim/bits.hpp"

namespace linksim::mapping {

using cplx = std::complex<double>;

enum class Modulation { qpsk, qam16, qam64 };

int bits_per_symbol(Modulation m);
const char* modulation_name(Modulation m);

// Gray-labelled square constellation normalized to unit average energy.
// Labels are [I bits | Q bits], most significant first.
struct Constellation {
    int order = 0;
    int bits_per_symbol = 0;
    std::vector<cplx> points;  // indexed by label
    double axis_scale = 1.0;   // 1/sqrt(2), 1/sqrt(10), 1/sqrt(42)

    static const Constellation& get(Modulation m);
    double min_distance() const;
};

std::vector<cplx> map_bits(std::span<const std::uint8_t> bits, const Constellation& c);

// Nearest-point label; exact ties resolved toward the lowest label.
std::uint32_t demap_symbol(cplx y, const Constellation& c);
bits::BitBlock demap_hard(std::span<const cplx> symbols, const Constellation& c);

} // namespace linksim::mapping
