#include "linksim/mapping.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace linksim::mapping {

namespace {

// Reflected-Gray amplitude levels per axis, highest level for label 0.
// 2 levels: 0->+1, 1->-1
// 4 levels: 00->+3, 01->+1, 11->-1, 10->-3
// 8 levels: 000->+7 ... 100->-7
int gray_level(unsigned label, int bits) {
    static const int lv2[2] = {+1, -1};
    static const int lv4[4] = {+3, +1, -3, -1};        // indexed by label
    static const int lv8[8] = {+7, +5, +1, +3, -7, -5, -1, -3};
    switch (bits) {
        case 1: return lv2[label & 1];
        case 2: return lv4[label & 3];
        case 3: return lv8[label & 7];
        default: throw std::logic_error("gray_level: unsupported width");
    }
}

Constellation build(int order) {
    Constellation c;
    c.order = order;
    c.bits_per_symbol = 0;
    while ((1 << c.bits_per_symbol) < order) ++c.bits_per_symbol;
    const int axis_bits = c.bits_per_symbol / 2;
    // average energy of the {+/-1,..} grid per axis: (2/L) * sum of odd^2
    const int levels = 1 << axis_bits;
    double e_axis = 0.0;
    for (int i = 0; i < levels; ++i) {
        const double a = gray_level(static_cast<unsigned>(i), axis_bits);
        e_axis += a * a;
    }
    e_axis /= levels;
    c.axis_scale = 1.0 / std::sqrt(2.0 * e_axis);
    c.points.resize(static_cast<std::size_t>(order));
    for (unsigned label = 0; label < static_cast<unsigned>(order); ++label) {
        const unsigned i_bits = label >> axis_bits;
        const unsigned q_bits = label & ((1u << axis_bits) - 1);
        c.points[label] = cplx(gray_level(i_bits, axis_bits) * c.axis_scale,
                               gray_level(q_bits, axis_bits) * c.axis_scale);
    }
    return c;
}

} // namespace

int bits_per_symbol(Modulation m) {
    switch (m) {
        case Modulation::qpsk: return 2;
        case Modulation::qam16: return 4;
        case Modulation::qam64: return 6;
    }
    return 0;
}

const char* modulation_name(Modulation m) {
    switch (m) {
        case Modulation::qpsk: return "qpsk";
        case Modulation::qam16: return "qam16";
        case Modulation::qam64: return "qam64";
    }
    return "?";
}

const Constellation& Constellation::get(Modulation m) {
    static const Constellation qpsk = build(4);
    static const Constellation qam16 = build(16);
    static const Constellation qam64 = build(64);
    switch (m) {
        case Modulation::qpsk: return qpsk;
        case Modulation::qam16: return qam16;
        default: return qam64;
    }
}

double Constellation::min_distance() const {
    return 2.0 * axis_scale;
}

std::vector<cplx> map_bits(std::span<const std::uint8_t> bits, const Constellation& c) {
    const std::size_t bps = static_cast<std::size_t>(c.bits_per_symbol);
    if (bits.size() % bps != 0)
        throw std::invalid_argument("map_bits: length not a multiple of bits/symbol");
    std::vector<cplx> out(bits.size() / bps);
    for (std::size_t s = 0; s < out.size(); ++s) {
        unsigned label = 0;
        for (std::size_t b = 0; b < bps; ++b)
            label = (label << 1) | (bits[s * bps + b] & 1u);
        out[s] = c.points[label];
    }
    return out;
}

std::uint32_t demap_symbol(cplx y, const Constellation& c) {
    // per-axis nearest Gray level; ties fall toward the lower axis label,
    // which is also the lower full label since labels are [I|Q]
    const int axis_bits = c.bits_per_symbol / 2;
    const int levels = 1 << axis_bits;
    auto slice = [&](double v) -> unsigned {
        unsigned best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (int l = 0; l < levels; ++l) {
            const double d = std::abs(v - gray_level(static_cast<unsigned>(l), axis_bits) *
                                              c.axis_scale);
            if (d < best_d) {
                best_d = d;
                best = static_cast<unsigned>(l);
            }
        }
        return best;
    };
    return (slice(y.real()) << axis_bits) | slice(y.imag());
}

bits::BitBlock demap_hard(std::span<const cplx> symbols, const Constellation& c) {
    const int bps = c.bits_per_symbol;
    bits::BitBlock out(symbols.size() * static_cast<std::size_t>(bps));
    for (std::size_t s = 0; s < symbols.size(); ++s) {
        const std::uint32_t label = demap_symbol(symbols[s], c);
        for (int b = 0; b < bps; ++b)
            out[s * bps + b] = static_cast<std::uint8_t>((label >> (bps - 1 - b)) & 1u);
    }
    return out;
}

} // namespace linksim::mapping
