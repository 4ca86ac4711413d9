#pragma once

#include <cstdint>
#include <vector>

namespace linksim::bits {

using BitBlock = std::vector<std::uint8_t>;

// Rate-1/2 convolutional mother code, zero-tail terminated.
// Generators are the octal-coded taps of the shift register, MSB on the
// newest input bit.
struct CodecSpec {
    int constraint_length = 7;
    unsigned g0 = 0171;
    unsigned g1 = 0133;

    int tail_bits() const { return constraint_length - 1; }
    unsigned n_states() const { return 1u << (constraint_length - 1); }
};

// PRBS whitening with x^15 + x^14 + 1, applied per block. Involution for a
// fixed seed. seed_state must be a nonzero 15-bit value.
BitBlock randomize(const BitBlock& data, unsigned seed_state = 0x7FFF);

// First `count` output bits of the PRBS itself (exposed for tests/pilots).
BitBlock prbs15(unsigned seed_state, std::size_t count);

BitBlock conv_encode(const BitBlock& data, const CodecSpec& spec = {});

// Hard-decision Hamming-metric ML decoding; expects a zero-tail codeword and
// returns the encoder input with the tail stripped.
BitBlock viterbi_decode(const BitBlock& coded, const CodecSpec& spec = {});

// Block interleaver: written in column order, read in row order.
BitBlock interleave(const BitBlock& data, int rows, int cols);
BitBlock deinterleave(const BitBlock& data, int rows, int cols);

struct ErrorCount {
    std::uint64_t errors = 0;
    std::uint64_t total = 0;
};
ErrorCount count_bit_errors(const BitBlock& tx, const BitBlock& rx);

} // namespace linksim::bits
