#pragma once

#include <complex>
#include <cstdint>
#include <utility>

#include "linksim/mapping.hpp"

namespace linksim::stbc {

using cplx = std::complex<double>;

// Alamouti 2x1 codeword: slot 1 sends (s1, s2), slot 2 sends
// (-conj(s2), conj(s1)) across the two antennas.
struct StbcPair {
    cplx slot1_ant1, slot1_ant2;
    cplx slot2_ant1, slot2_ant2;
};

StbcPair stbc_encode(cplx s1, cplx s2);

struct ChannelGains {
    cplx h1, h2;
    double alpha_sq() const { return std::norm(h1) + std::norm(h2); }
};

// Linear combining with known gains; noiseless output is
// (|h1|^2 + |h2|^2) * (s1, s2).
std::pair<cplx, cplx> stbc_combine(cplx r1, cplx r2, const ChannelGains& h);

struct Decision {
    cplx point;
    std::uint32_t label = 0;
    bool erasure = false;  // alpha_sq == 0, decision meaningless
};

// ML symbol decision on a combined branch: minimizes
// |s_tilde - s|^2 + (alpha_sq - 1)|s|^2, valid for non-constant-modulus
// constellations. Equivalent to nearest-point slicing of s_tilde/alpha_sq.
Decision stbc_ml_decide(cplx s_tilde, double alpha_sq, const mapping::Constellation& c);
Decision stbc_ml_decide(cplx s_tilde, const ChannelGains& h, const mapping::Constellation& c);

} // namespace linksim::stbc
