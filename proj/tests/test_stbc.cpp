#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "linksim/stbc.hpp"

using namespace linksim::stbc;
using linksim::mapping::Constellation;
using linksim::mapping::Modulation;

namespace {

std::mt19937_64 rng(2024);
std::uniform_real_distribution<double> uni(-1.0, 1.0);
cplx rand_c() { return {uni(rng), uni(rng)}; }

// reference metric scan: |s_tilde - s|^2 + (alpha_sq - 1)|s|^2, lowest label
// wins ties
std::uint32_t exhaustive_decide(cplx s_tilde, double alpha_sq, const Constellation& c) {
    std::uint32_t best = 0;
    double best_m = std::numeric_limits<double>::infinity();
    for (std::uint32_t label = 0; label < c.points.size(); ++label) {
        const cplx s = c.points[label];
        const double m = std::norm(s_tilde - s) + (alpha_sq - 1.0) * std::norm(s);
        if (m < best_m) {
            best_m = m;
            best = label;
        }
    }
    return best;
}

} // namespace

TEST_CASE("encoder slot layout and orthogonality") {
    const auto p = stbc_encode({1.0, 0.0}, {0.0, 0.0});
    CHECK(p.slot1_ant1 == cplx{1.0, 0.0});
    CHECK(p.slot1_ant2 == cplx{0.0, 0.0});
    CHECK(p.slot2_ant1 == cplx{0.0, 0.0});
    CHECK(p.slot2_ant2 == cplx{1.0, 0.0});

    for (int t = 0; t < 100; ++t) {
        const cplx a = rand_c(), b = rand_c();
        const auto e = stbc_encode(a, b);
        // transmit matrix [a b; -b* a*]: orthogonal columns, det = |a|^2+|b|^2
        const cplx det = e.slot1_ant1 * e.slot2_ant2 - e.slot1_ant2 * e.slot2_ant1;
        CHECK(std::abs(det - cplx{std::norm(a) + std::norm(b), 0.0}) < 1e-12);
        const cplx inner = e.slot1_ant1 * std::conj(e.slot1_ant2) +
                           e.slot2_ant1 * std::conj(e.slot2_ant2);
        CHECK(std::abs(inner) < 1e-12);
    }
}

TEST_CASE("noiseless combining returns alpha_sq-scaled symbols") {
    // identity channel passes the pair through unscaled
    const auto e = stbc_encode({0.3, 0.4}, {-0.2, 0.9});
    ChannelGains id{{1.0, 0.0}, {0.0, 0.0}};
    cplx r1 = e.slot1_ant1, r2 = e.slot2_ant1;
    auto [s1, s2] = stbc_combine(r1, r2, id);
    CHECK(std::abs(s1 - cplx{0.3, 0.4}) < 1e-12);
    CHECK(std::abs(s2 - cplx{-0.2, 0.9}) < 1e-12);

    for (int t = 0; t < 10000; ++t) {
        const cplx a = rand_c(), b = rand_c();
        const ChannelGains h{rand_c(), rand_c()};
        const auto enc = stbc_encode(a, b);
        const cplx y1 = h.h1 * enc.slot1_ant1 + h.h2 * enc.slot1_ant2;
        const cplx y2 = h.h1 * enc.slot2_ant1 + h.h2 * enc.slot2_ant2;
        const auto [c1, c2] = stbc_combine(y1, y2, h);
        const double alpha = h.alpha_sq();
        CHECK(std::abs(c1 - alpha * a) < 1e-12 * (1.0 + alpha));
        CHECK(std::abs(c2 - alpha * b) < 1e-12 * (1.0 + alpha));
    }
}

TEST_CASE("single-antenna degradation: h2 = 0 gives matched filtering") {
    const ChannelGains h{{0.6, -0.7}, {0.0, 0.0}};
    const cplx r1 = rand_c(), r2 = rand_c();
    const auto [s1, s2] = stbc_combine(r1, r2, h);
    CHECK(std::abs(s1 - std::conj(h.h1) * r1) < 1e-12);
    CHECK(std::abs(s2 + h.h1 * std::conj(r2)) < 1e-12);
}

TEST_CASE("pure-noise input: combined branch variance is alpha_sq * sigma^2") {
    std::mt19937_64 g(7);
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));  // unit-variance complex
    const ChannelGains h{{0.8, 0.3}, {-0.5, 0.4}};
    double acc = 0.0;
    const int trials = 200000;
    for (int t = 0; t < trials; ++t) {
        const cplx n1{n(g), n(g)}, n2{n(g), n(g)};
        const auto [s1, s2] = stbc_combine(n1, n2, h);
        acc += std::norm(s1);
        (void)s2;
    }
    CHECK(acc / trials == doctest::Approx(h.alpha_sq()).epsilon(0.02));
}

TEST_CASE("ML decision: QPSK noiseless exactness for any channel") {
    const auto& c = Constellation::get(Modulation::qpsk);
    for (int t = 0; t < 1000; ++t) {
        const std::uint32_t label = static_cast<std::uint32_t>(rng() % 4);
        const ChannelGains h{rand_c(), rand_c()};
        if (h.alpha_sq() < 1e-6) continue;
        const cplx s_tilde = h.alpha_sq() * c.points[label];
        CHECK(stbc_ml_decide(s_tilde, h, c).label == label);
    }
}

TEST_CASE("ML decision: alpha_sq = 1 reduces to plain nearest neighbor") {
    const auto& c = Constellation::get(Modulation::qam16);
    for (int t = 0; t < 1000; ++t) {
        const cplx y = 2.0 * rand_c();
        CHECK(stbc_ml_decide(y, 1.0, c).label == linksim::mapping::demap_symbol(y, c));
    }
}

TEST_CASE("ML decision agrees with the exhaustive metric oracle") {
    for (auto m : {Modulation::qam16, Modulation::qam64}) {
        const auto& c = Constellation::get(m);
        int checked = 0;
        for (int t = 0; t < 10000; ++t) {
            const ChannelGains h{rand_c(), rand_c()};
            const double alpha = h.alpha_sq();
            if (alpha < 1e-9) continue;
            const auto label = static_cast<std::uint32_t>(rng() % c.points.size());
            const cplx s_tilde = alpha * c.points[label];  // noiseless
            const auto got = stbc_ml_decide(s_tilde, alpha, c);
            CHECK(got.label == label);
            CHECK(got.label == exhaustive_decide(s_tilde, alpha, c));
            // and with noise: fast path still equals the oracle metric
            const cplx noisy = s_tilde + 0.3 * rand_c();
            CHECK(stbc_ml_decide(noisy, alpha, c).label == exhaustive_decide(noisy, alpha, c));
            ++checked;
        }
        CHECK(checked > 9000);
    }
}

TEST_CASE("decision invariant to common unit-modulus rotation of h and r") {
    const auto& c = Constellation::get(Modulation::qam16);
    for (int t = 0; t < 500; ++t) {
        ChannelGains h{rand_c(), rand_c()};
        if (h.alpha_sq() < 1e-6) continue;
        const cplx r1 = rand_c(), r2 = rand_c();
        const double ang = uni(rng) * 3.14159;
        const cplx u{std::cos(ang), std::sin(ang)};
        const auto [s1a, s2a] = stbc_combine(r1, r2, h);
        // rotating both slots and both gains by u leaves the combiner output
        // unchanged up to |u|^2 = 1
        const ChannelGains hu{u * h.h1, u * h.h2};
        const auto [s1b, s2b] = stbc_combine(u * r1, u * r2, hu);
        CHECK(stbc_ml_decide(s1a, h, c).label == stbc_ml_decide(s1b, hu, c).label);
        CHECK(stbc_ml_decide(s2a, h, c).label == stbc_ml_decide(s2b, hu, c).label);
    }
}

TEST_CASE("deep fade reports an erasure") {
    const auto& c = Constellation::get(Modulation::qpsk);
    const auto d = stbc_ml_decide({0.5, 0.5}, 0.0, c);
    CHECK(d.erasure);
}
