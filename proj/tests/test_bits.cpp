#include "doctest.h"

#include <stdexcept>

#include <random>

#include "linksim/bits.hpp"

using namespace linksim::bits;

namespace {

BitBlock random_bits(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    BitBlock b(n);
    for (auto& v : b) v = static_cast<std::uint8_t>(rng() & 1);
    return b;
}

// independent LFSR oracle for x^15 + x^14 + 1, kept deliberately naive
BitBlock lfsr_oracle(std::size_t n) {
    bool reg[15];
    for (bool& b : reg) b = true;  // all-ones seed
    BitBlock out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool fb = reg[14] ^ reg[13];  // taps 15 and 14
        out[i] = fb ? 1 : 0;
        for (int j = 14; j > 0; --j) reg[j] = reg[j - 1];
        reg[0] = fb;
    }
    return out;
}

} // namespace

TEST_CASE("randomizer: all-zero input yields the PRBS itself") {
    BitBlock zeros(64, 0);
    CHECK(randomize(zeros) == prbs15(0x7FFF, 64));
}

TEST_CASE("randomizer: hand-stepped LFSR oracle, 16 bits") {
    const auto oracle = lfsr_oracle(16);
    const auto data = random_bits(16, 5);
    const auto out = randomize(data);
    for (std::size_t i = 0; i < 16; ++i) CHECK(out[i] == (data[i] ^ oracle[i]));
}

TEST_CASE("randomizer: involution") {
    for (unsigned seed : {0x7FFFu, 0x1234u, 0x0001u}) {
        const auto x = random_bits(301, seed);
        CHECK(randomize(randomize(x, seed), seed) == x);
    }
}

TEST_CASE("randomizer: zero seed rejected") {
    BitBlock x(8, 1);
    CHECK_THROWS_AS(randomize(x, 0), std::invalid_argument);
    CHECK_THROWS_AS(randomize(BitBlock{}, 0x7FFF), std::invalid_argument);
}

TEST_CASE("conv_encode: zero maps to zero and output length is 2(len+K-1)") {
    BitBlock zeros(40, 0);
    const auto out = conv_encode(zeros);
    CHECK(out.size() == 2 * (40 + 6));
    for (auto b : out) CHECK(b == 0);
}

TEST_CASE("conv_encode: impulse response reads the generator taps") {
    BitBlock impulse{1};
    const auto out = conv_encode(impulse);
    const CodecSpec spec;
    REQUIRE(out.size() == 14);
    for (int t = 0; t < 7; ++t) {
        CHECK(out[2 * t] == ((spec.g0 >> (6 - t)) & 1u));
        CHECK(out[2 * t + 1] == ((spec.g1 >> (6 - t)) & 1u));
    }
}

TEST_CASE("conv_encode: linear over GF(2)") {
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = random_bits(120, 100 + trial);
        const auto b = random_bits(120, 200 + trial);
        BitBlock axb(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) axb[i] = a[i] ^ b[i];
        const auto ea = conv_encode(a);
        const auto eb = conv_encode(b);
        const auto eab = conv_encode(axb);
        for (std::size_t i = 0; i < eab.size(); ++i) CHECK(eab[i] == (ea[i] ^ eb[i]));
    }
}

TEST_CASE("viterbi: noiseless inversion across block lengths") {
    for (std::size_t len : {8u, 17u, 64u, 511u, 4096u}) {
        const auto x = random_bits(len, len);
        CHECK(viterbi_decode(conv_encode(x)) == x);
    }
}

TEST_CASE("viterbi: single flipped bit is corrected") {
    const auto x = random_bits(64, 77);
    auto coded = conv_encode(x);
    for (std::size_t pos : {0u, 63u, 127u, 139u}) {
        auto hit = coded;
        hit[pos] ^= 1;
        CHECK(viterbi_decode(hit) == x);
    }
}

TEST_CASE("viterbi: all-zero word decodes to all zeros") {
    BitBlock coded(2 * 38, 0);
    const auto out = viterbi_decode(coded);
    CHECK(out == BitBlock(38 - 6, 0));
}

TEST_CASE("viterbi: malformed length rejected") {
    CHECK_THROWS_AS(viterbi_decode(BitBlock(13, 0)), std::invalid_argument);
    CHECK_THROWS_AS(viterbi_decode(BitBlock(10, 0)), std::invalid_argument);
}

TEST_CASE("interleaver: 2x2 block and rows=1 identity") {
    CHECK(interleave({1, 0, 1, 1}, 2, 2) == BitBlock{1, 1, 0, 1});
    // [a,b,c,d] written by columns, read by rows -> [a,c,b,d]
    CHECK(interleave({0, 1, 0, 1}, 2, 2) == BitBlock{0, 0, 1, 1});
    const auto x = random_bits(16, 3);
    CHECK(interleave(x, 1, 16) == x);
}

TEST_CASE("interleaver: round trip and size checks") {
    const auto x = random_bits(12 * 16, 9);
    CHECK(deinterleave(interleave(x, 12, 16), 12, 16) == x);
    for (auto [r, c] : {std::pair{3, 5}, {24, 16}, {7, 11}}) {
        const auto y = random_bits(static_cast<std::size_t>(r * c), 31 + r);
        CHECK(deinterleave(interleave(y, r, c), r, c) == y);
    }
    CHECK_THROWS_AS(interleave(x, 5, 16), std::invalid_argument);
    CHECK_THROWS_AS(deinterleave(x, 16, 16), std::invalid_argument);
}

TEST_CASE("count_bit_errors") {
    const auto x = random_bits(1000, 21);
    auto y = x;
    CHECK(count_bit_errors(x, y).errors == 0);
    CHECK(count_bit_errors(x, y).total == 1000);
    BitBlock inv(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) inv[i] = x[i] ^ 1;
    CHECK(count_bit_errors(x, inv).errors == 1000);

    const auto z = random_bits(1000, 22);
    std::uint64_t expect = 0;
    for (std::size_t i = 0; i < x.size(); ++i) expect += (x[i] != z[i]);
    CHECK(count_bit_errors(x, z).errors == expect);

    CHECK_THROWS_AS(count_bit_errors(x, BitBlock(5, 0)), std::invalid_argument);
}
