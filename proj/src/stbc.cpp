#include "linksim/stbc.hpp"

namespace linksim::stbc {

StbcPair stbc_encode(cplx s1, cplx s2) {
    return {s1, s2, -std::conj(s2), std::conj(s1)};
}

std::pair<cplx, cplx> stbc_combine(cplx r1, cplx r2, const ChannelGains& h) {
    const cplx r2c = std::conj(r2);
    return {std::conj(h.h1) * r1 + h.h2 * r2c, std::conj(h.h2) * r1 - h.h1 * r2c};
}

Decision stbc_ml_decide(cplx s_tilde, double alpha_sq, const mapping::Constellation& c) {
    Decision d;
    if (alpha_sq <= 0.0) {
        d.erasure = true;
        d.label = 0;
        d.point = c.points[0];
        return d;
    }
    d.label = mapping::demap_symbol(s_tilde / alpha_sq, c);
    d.point = c.points[d.label];
    return d;
}

Decision stbc_ml_decide(cplx s_tilde, const ChannelGains& h, const mapping::Constellation& c) {
    return stbc_ml_decide(s_tilde, h.alpha_sq(), c);
}

} // namespace linksim::stbc
