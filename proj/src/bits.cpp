#include "linksim/bits.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <stdexcept>

#include "linksim/kernels/kernels.hpp"

namespace linksim::bits {

namespace {

void check_binary(const BitBlock& b) {
    for (auto v : b)
        if (v > 1) throw std::invalid_argument("BitBlock element is not 0/1");
}

// One PRBS tick: output = s14 ^ s13 of the 15-bit register, shifted in at
// the bottom.
inline unsigned prbs_tick(unsigned& state) {
    const unsigned out = ((state >> 14) ^ (state >> 13)) & 1u;
    state = ((state << 1) | out) & 0x7FFFu;
    return out;
}

} // namespace

BitBlock prbs15(unsigned seed_state, std::size_t count) {
    if (seed_state == 0 || seed_state > 0x7FFF)
        throw std::invalid_argument("PRBS seed must be a nonzero 15-bit value");
    unsigned state = seed_state;
    BitBlock out(count);
    for (auto& b : out) b = static_cast<std::uint8_t>(prbs_tick(state));
    return out;
}

BitBlock randomize(const BitBlock& data, unsigned seed_state) {
    if (data.empty()) throw std::invalid_argument("randomize: empty block");
    check_binary(data);
    if (seed_state == 0 || seed_state > 0x7FFF)
        throw std::invalid_argument("randomize: seed must be a nonzero 15-bit value");
    unsigned state = seed_state;
    BitBlock out(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        out[i] = static_cast<std::uint8_t>(data[i] ^ prbs_tick(state));
    return out;
}

BitBlock conv_encode(const BitBlock& data, const CodecSpec& spec) {
    if (data.empty()) throw std::invalid_argument("conv_encode: empty block");
    if (spec.constraint_length < 2 || spec.constraint_length > 16)
        throw std::invalid_argument("conv_encode: bad constraint length");
    const unsigned reg_mask = (1u << spec.constraint_length) - 1;
    if (spec.g0 == 0 || spec.g1 == 0 || spec.g0 > reg_mask || spec.g1 > reg_mask)
        throw std::invalid_argument("conv_encode: bad generator polynomial");
    check_binary(data);

    BitBlock out;
    out.reserve(2 * (data.size() + static_cast<std::size_t>(spec.tail_bits())));
    unsigned reg = 0;  // newest bit in the MSB position of the K-bit window
    auto push = [&](unsigned in) {
        reg = ((reg >> 1) | (in << (spec.constraint_length - 1))) & reg_mask;
        // generators are written MSB-on-newest, the register stores newest
        // high, so a plain AND + parity works
        out.push_back(static_cast<std::uint8_t>(std::popcount(reg & spec.g0) & 1));
        out.push_back(static_cast<std::uint8_t>(std::popcount(reg & spec.g1) & 1));
    };
    for (auto b : data) push(b);
    for (int i = 0; i < spec.tail_bits(); ++i) push(0);
    return out;
}

BitBlock viterbi_decode(const BitBlock& coded, const CodecSpec& spec) {
    const unsigned n_states = spec.n_states();
    const unsigned reg_mask = (1u << spec.constraint_length) - 1;
    if (coded.size() % 2 != 0 ||
        coded.size() < 2 * static_cast<std::size_t>(spec.tail_bits()))
        throw std::invalid_argument("viterbi_decode: malformed codeword length");
    check_binary(coded);

    const std::size_t n_steps = coded.size() / 2;

    // branch outputs per (state, input); state = previous K-1 input bits,
    // newest in the top bit
    std::vector<std::uint8_t> branch(n_states * 2);
    for (unsigned s = 0; s < n_states; ++s) {
        for (unsigned in = 0; in < 2; ++in) {
            // encoder window = [input, K-1 state bits], newest on top
            const unsigned window = ((in << (spec.constraint_length - 1)) | s) & reg_mask;
            const unsigned o0 = static_cast<unsigned>(std::popcount(window & spec.g0)) & 1u;
            const unsigned o1 = static_cast<unsigned>(std::popcount(window & spec.g1)) & 1u;
            branch[s * 2 + in] = static_cast<std::uint8_t>((o0 << 1) | o1);
        }
    }

    constexpr std::uint32_t inf = std::numeric_limits<std::uint32_t>::max() / 2;
    std::vector<std::uint32_t> metric(n_states, inf), next(n_states, inf);
    metric[0] = 0;  // encoder starts in the zero state
    std::vector<std::uint8_t> decisions(n_steps * n_states);

    for (std::size_t t = 0; t < n_steps; ++t) {
        const unsigned rx = (static_cast<unsigned>(coded[2 * t]) << 1) | coded[2 * t + 1];
        std::fill(next.begin(), next.end(), inf);
        std::uint8_t* dec = &decisions[t * n_states];
        for (unsigned s = 0; s < n_states; ++s) {
            const std::uint32_t pm = metric[s];
            if (pm >= inf) continue;
            for (unsigned in = 0; in < 2; ++in) {
                const unsigned ns = (s >> 1) | (in << (spec.constraint_length - 2));
                const unsigned diff = rx ^ branch[s * 2 + in];
                const std::uint32_t m = pm + ((diff >> 1) & 1u) + (diff & 1u);
                if (m < next[ns]) {
                    next[ns] = m;
                    // predecessor state is recoverable from (ns, oldest bit)
                    dec[ns] = static_cast<std::uint8_t>(s & 1u);
                }
            }
        }
        metric.swap(next);
    }

    // zero-tail: the survivor must end in state 0
    BitBlock decoded(n_steps);
    unsigned s = 0;
    for (std::size_t t = n_steps; t-- > 0;) {
        const unsigned oldest = decisions[t * n_states + s];
        decoded[t] = static_cast<std::uint8_t>((s >> (spec.constraint_length - 2)) & 1u);
        s = ((s << 1) | oldest) & (n_states - 1);
    }
    decoded.resize(n_steps - static_cast<std::size_t>(spec.tail_bits()));
    return decoded;
}

BitBlock interleave(const BitBlock& data, int rows, int cols) {
    if (rows <= 0 || cols <= 0 ||
        data.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
        throw std::invalid_argument("interleave: size != rows*cols");
    BitBlock out(data.size());
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            out[static_cast<std::size_t>(r) * cols + c] =
                data[static_cast<std::size_t>(c) * rows + r];
    return out;
}

BitBlock deinterleave(const BitBlock& data, int rows, int cols) {
    if (rows <= 0 || cols <= 0 ||
        data.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
        throw std::invalid_argument("deinterleave: size != rows*cols");
    BitBlock out(data.size());
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            out[static_cast<std::size_t>(c) * rows + r] =
                data[static_cast<std::size_t>(r) * cols + c];
    return out;
}

ErrorCount count_bit_errors(const BitBlock& tx, const BitBlock& rx) {
    if (tx.size() != rx.size())
        throw std::invalid_argument("count_bit_errors: length mismatch");
    ErrorCount ec;
    ec.total = tx.size();
    ec.errors = kern::bit_errors(tx.data(), rx.data(), tx.size());
    return ec;
}

} // namespace linksim::bits
