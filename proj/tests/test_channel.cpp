#include "doctest.h"

#include <stdexcept>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "linksim/channel.hpp"
#include "linksim/ofdm.hpp"

using namespace linksim::channel;

namespace {

double db(double lin) { return 10.0 * std::log10(lin); }

// Simpson quadrature on [a, b]
template <typename F>
double integrate(F f, double a, double b, int n) {
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
    return acc * h / 3.0;
}

} // namespace

TEST_CASE("SUI parameter sets match the published tables") {
    const auto s1 = sui_profile(1);
    CHECK(s1.tap_power_db == std::vector<double>{0, -15, -20});
    CHECK(s1.k_factor == std::vector<double>{4, 0, 0});
    CHECK(s1.tap_delay_us == std::vector<double>{0.0, 0.4, 0.9});
    CHECK(s1.max_doppler_hz == std::vector<double>{0.4, 0.3, 0.5});
    CHECK(s1.antenna_corr == 0.7);
    CHECK(s1.gain_norm_db == -0.1771);
    CHECK(s1.terrain == 'C');

    const auto s4 = sui_profile(4);
    CHECK(s4.k_factor == std::vector<double>{0, 0, 0});
    CHECK(s4.gain_norm_db == -1.9218);

    const auto s6 = sui_profile(6);
    CHECK(s6.tap_delay_us == std::vector<double>{0, 14, 20});
    CHECK(s6.gain_norm_db == -0.5683);
    CHECK(s6.terrain == 'A');

    CHECK_THROWS_AS(sui_profile(0), std::invalid_argument);
    CHECK_THROWS_AS(sui_profile(7), std::invalid_argument);
}

TEST_CASE("forced large K gives a near-deterministic tap") {
    auto p = flat_rayleigh_profile();
    p.k_factor = {1e12};
    double lo = 1e9, hi = 0.0;
    for (int i = 0; i < 200; ++i) {
        const auto ch = realize_channel(p, 1, 16, 4e6, UpdateMode::block, 1000 + i);
        const double mag = std::abs(ch.gains[0][0][0]);
        lo = std::min(lo, mag);
        hi = std::max(hi, mag);
    }
    CHECK(hi - lo < 1e-4);
    CHECK(hi == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("per-model power budget within 1%") {
    for (int model = 1; model <= 6; ++model) {
        const auto p = sui_profile(model);
        double target = 0.0;
        for (double pw : p.tap_power_db) target += std::pow(10.0, pw / 10.0);
        target *= std::pow(10.0, p.gain_norm_db / 10.0);

        double acc = 0.0;
        const int n = 100000;
        for (int i = 0; i < n; ++i) {
            const auto ch =
                realize_channel(p, 1, 8, 4e6, UpdateMode::block,
                                0x5111 * static_cast<std::uint64_t>(model) + i);
            for (const auto& tap : ch.gains[0]) acc += std::norm(tap[0]);
        }
        CHECK(acc / n == doctest::Approx(target).epsilon(0.01));
    }
}

TEST_CASE("empirical K factor of the SUI-1 LOS tap") {
    const auto p = sui_profile(1);
    const int n = 100000;
    std::complex<double> mean{};
    double pow_acc = 0.0;
    std::vector<std::complex<double>> taps(n);
    for (int i = 0; i < n; ++i) {
        const auto ch = realize_channel(p, 1, 8, 4e6, UpdateMode::block, 0xaa00 + i);
        taps[static_cast<std::size_t>(i)] = ch.gains[0][0][0];
        mean += taps[static_cast<std::size_t>(i)];
        pow_acc += std::norm(taps[static_cast<std::size_t>(i)]);
    }
    mean /= n;
    const double a_sq = std::norm(mean);
    const double diffuse = pow_acc / n - a_sq;
    const double k_hat = a_sq / diffuse;
    CHECK(k_hat == doctest::Approx(4.0).epsilon(0.10));
}

TEST_CASE("antenna correlation of the diffuse processes") {
    const auto p = sui_profile(4);  // K = 0: taps are pure diffuse
    const int n = 100000;
    std::complex<double> cross{};
    double p1 = 0.0, p2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto ch = realize_channel(p, 2, 64, 4e6, UpdateMode::block, 0xbb00 + i);
        const auto g1 = ch.gains[0][0][0];
        const auto g2 = ch.gains[1][0][0];
        cross += g1 * std::conj(g2);
        p1 += std::norm(g1);
        p2 += std::norm(g2);
    }
    const double corr = std::abs(cross) / std::sqrt(p1 * p2);
    CHECK(corr == doctest::Approx(p.antenna_corr).epsilon(0.05 / p.antenna_corr));
}

TEST_CASE("tap delays collide at a too-coarse sample rate") {
    const auto p = sui_profile(1);  // 0, 0.4us, 0.9us
    CHECK_THROWS_AS(realize_channel(p, 1, 16, 1e5, UpdateMode::block, 1),
                    std::invalid_argument);
}

TEST_CASE("apply_channel: identity, shift, and convolution oracle") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::complex<double>> x(300);
    for (auto& v : x) v = {u(rng), u(rng)};

    ChannelRealization id;
    id.n_tx = 1;
    id.tap_delay_samples = {0};
    id.gains = {{{std::complex<double>{1.0, 0.0}}}};
    id.block_mode = true;
    id.duration = x.size();
    CHECK(apply_channel(x, id, 0) == x);

    ChannelRealization shift = id;
    shift.tap_delay_samples = {7};
    const auto y = apply_channel(x, shift, 0);
    for (std::size_t i = 0; i < 7; ++i) CHECK(y[i] == std::complex<double>{});
    for (std::size_t i = 7; i < x.size(); ++i) CHECK(y[i] == x[i - 7]);

    ChannelRealization tdl = id;
    tdl.tap_delay_samples = {0, 3, 11};
    tdl.gains = {{{std::complex<double>{0.8, -0.1}},
                  {std::complex<double>{-0.3, 0.2}},
                  {std::complex<double>{0.05, 0.4}}}};
    const auto z = apply_channel(x, tdl, 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::complex<double> expect = tdl.gains[0][0][0] * x[i];
        if (i >= 3) expect += tdl.gains[0][1][0] * x[i - 3];
        if (i >= 11) expect += tdl.gains[0][2][0] * x[i - 11];
        CHECK(std::abs(z[i] - expect) < 1e-12);
    }
}

TEST_CASE("continuous mode: spectrum confined to the Doppler bandwidth") {
    auto p = flat_rayleigh_profile();
    p.max_doppler_hz = {2.0};
    const std::size_t n = 32768;
    const double rate = 64.0;
    const auto ch = realize_channel(p, 1, n, rate, UpdateMode::continuous, 99);
    auto g = ch.gains[0][0];
    REQUIRE(g.size() == n);

    // mean power near unity
    double pw = 0.0;
    for (auto v : g) pw += std::norm(v);
    pw /= n;
    CHECK(pw > 0.2);
    CHECK(pw < 5.0);

    linksim::ofdm::FftPlan plan(n);
    linksim::ofdm::fft_inplace(g, plan);
    const double df = rate / static_cast<double>(n);
    double in_band = 0.0, out_band = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        const double f = (m <= n / 2) ? m * df : (static_cast<double>(m) - n) * df;
        if (std::abs(f) <= 2.0 * 1.02)
            in_band += std::norm(g[m]);
        else
            out_band += std::norm(g[m]);
    }
    CHECK(out_band / (in_band + out_band) < 0.01);  // -20 dB beyond f_m

    // autocorrelation decays on the 1/f_m timescale
    const auto& raw = ch.gains[0][0];
    auto acf = [&](std::size_t lag) {
        std::complex<double> acc{};
        for (std::size_t i = 0; i + lag < n; ++i) acc += raw[i] * std::conj(raw[i + lag]);
        return std::abs(acc) / (pw * static_cast<double>(n - lag));
    };
    CHECK(acf(1) > 0.9);                                       // ~1/64 of a Doppler period
    CHECK(acf(static_cast<std::size_t>(10.0 / 2.0 * rate)) < 0.3);  // 10 Doppler times
}

TEST_CASE("awgn: cap, power accuracy, determinism") {
    std::vector<std::complex<double>> x(1 << 20, std::complex<double>{1.0, 0.0});
    auto y = x;
    add_awgn(y, 1e9, 1.0, 5);
    CHECK(y == x);

    add_awgn(y, 0.0, 1.0, 6);
    double np = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) np += std::norm(y[i] - x[i]);
    np /= static_cast<double>(y.size());
    CHECK(np == doctest::Approx(1.0).epsilon(0.01));

    auto a = x, b = x;
    add_awgn(a, 10.0, 2.0, 77);
    add_awgn(b, 10.0, 2.0, 77);
    CHECK(a == b);

    // measured SNR within 0.1 dB at 10 dB
    double np10 = 0.0;
    auto c = x;
    add_awgn(c, 10.0, 1.0, 78);
    for (std::size_t i = 0; i < c.size(); ++i) np10 += std::norm(c[i] - x[i]);
    np10 /= static_cast<double>(c.size());
    CHECK(std::abs(db(1.0 / np10) - 10.0) < 0.1);

    CHECK_THROWS_AS(add_awgn(y, 10.0, 0.0, 1), std::invalid_argument);
}

TEST_CASE("rician pdf: Rayleigh special case and normalization") {
    CHECK(rician_pdf(1.0, 1.0, 0.0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
    for (double r : {0.1, 0.5, 1.0, 2.0, 3.5}) {
        const double sigma_sq = 0.7;
        const double expect = r / sigma_sq * std::exp(-r * r / (2.0 * sigma_sq));
        CHECK(rician_pdf(r, sigma_sq, 0.0) == doctest::Approx(expect).epsilon(1e-12));
    }
    for (auto [sigma_sq, a] : {std::pair{1.0, 0.0}, {0.5, 1.0}, {2.0, 3.0}, {1.0, 8.0}}) {
        const double sigma = std::sqrt(sigma_sq);
        const double upper = 12.0 * sigma + a;
        const double integral =
            integrate([&](double r) { return rician_pdf(r, sigma_sq, a); }, 0.0, upper, 4000);
        CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
    }
    CHECK_THROWS_AS(rician_pdf(-1.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(rician_pdf(1.0, -1.0, 0.0), std::invalid_argument);
}

TEST_CASE("rounded doppler psd shape") {
    CHECK(rounded_doppler_psd(0.0, 1.0) == 1.0);
    CHECK(rounded_doppler_psd(1.0, 1.0) == doctest::Approx(0.065).epsilon(1e-12));
    CHECK(rounded_doppler_psd(1.01, 1.0) == 0.0);
}
