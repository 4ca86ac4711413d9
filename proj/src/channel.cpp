#include "linksim/channel.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "linksim/kernels/kernels.hpp"
#include "linksim/ofdm.hpp"

namespace linksim::channel {

namespace {

// uniform in (0, 1], suitable for the log of the Box-Muller transform
inline double uniform_pos(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

inline cplx gaussian_pair(std::mt19937_64& rng) {
    const double u1 = uniform_pos(rng);
    const double u2 = uniform_pos(rng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(a), r * std::sin(a)};
}

// unit-variance circular complex Gaussian
inline cplx cnormal(std::mt19937_64& rng) {
    return gaussian_pair(rng) * std::sqrt(0.5);
}

void validate_profile(const SuiProfile& p) {
    const std::size_t n = p.n_taps();
    if (n == 0 || p.k_factor.size() != n || p.tap_delay_us.size() != n ||
        p.max_doppler_hz.size() != n)
        throw std::invalid_argument("channel profile: inconsistent tap arrays");
    if (p.tap_delay_us.front() != 0.0)
        throw std::invalid_argument("channel profile: first tap delay must be 0");
    for (std::size_t i = 1; i < n; ++i)
        if (p.tap_delay_us[i] <= p.tap_delay_us[i - 1])
            throw std::invalid_argument("channel profile: delays must increase");
    if (p.tap_power_db.front() != 0.0)
        throw std::invalid_argument("channel profile: tap 1 power must be 0 dB");
    for (std::size_t i = 0; i < n; ++i) {
        if (p.tap_power_db[i] > 0.0)
            throw std::invalid_argument("channel profile: tap powers must be <= 0 dB");
        if (p.k_factor[i] < 0.0)
            throw std::invalid_argument("channel profile: K factors must be >= 0");
    }
    if (p.antenna_corr < 0.0 || p.antenna_corr > 1.0)
        throw std::invalid_argument("channel profile: antenna correlation out of [0,1]");
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Doppler-shaped unit-variance complex Gaussian series via spectral masking.
std::vector<cplx> shaped_process(std::size_t n, double sample_rate, double f_max,
                                 std::mt19937_64& rng) {
    const std::size_t nfft = next_pow2(std::max<std::size_t>(n, 2));
    const double df = sample_rate / static_cast<double>(nfft);
    std::vector<cplx> spec(nfft, cplx{});
    double psd_sum = 0.0;
    for (std::size_t m = 0; m < nfft; ++m) {
        const double f = (m <= nfft / 2) ? m * df : (static_cast<double>(m) - nfft) * df;
        const double s = rounded_doppler_psd(f, f_max);
        // always keep DC so an unresolvably slow process degrades to a
        // constant rather than to zero
        if (s <= 0.0 && m != 0) continue;
        const double w = (m == 0 && s <= 0.0) ? 1.0 : s;
        spec[m] = cnormal(rng) * std::sqrt(w);
        psd_sum += w;
    }
    ofdm::FftPlan plan(nfft);
    ofdm::ifft_inplace(spec, plan);
    const double scale = static_cast<double>(nfft) / std::sqrt(psd_sum);
    std::vector<cplx> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = spec[i] * scale;
    return out;
}

} // namespace

double rounded_doppler_psd(double f, double f_max) {
    if (f_max <= 0.0) return 0.0;
    const double f0 = std::abs(f) / f_max;
    if (f0 > 1.0) return 0.0;
    const double f2 = f0 * f0;
    return 1.0 - 1.72 * f2 + 0.785 * f2 * f2;
}

SuiProfile sui_profile(int model) {
    SuiProfile p;
    switch (model) {
        case 1:
            p = {"sui1", {0, -15, -20}, {4, 0, 0}, {0.0, 0.4, 0.9}, {0.4, 0.3, 0.5},
                 0.7, -0.1771, 'C'};
            break;
        case 2:
            p = {"sui2", {0, -12, -15}, {2, 0, 0}, {0.0, 0.4, 1.1}, {0.2, 0.15, 0.25},
                 0.5, -0.3930, 'C'};
            break;
        case 3:
            p = {"sui3", {0, -5, -10}, {1, 0, 0}, {0.0, 0.4, 0.9}, {0.4, 0.3, 0.5},
                 0.4, -1.5113, 'B'};
            break;
        case 4:
            p = {"sui4", {0, -4, -8}, {0, 0, 0}, {0.0, 0.5, 4.0}, {0.2, 0.15, 0.25},
                 0.3, -1.9218, 'B'};
            break;
        case 5:
            p = {"sui5", {0, -5, -10}, {0, 0, 0}, {0, 4, 10}, {2, 1.5, 2.5},
                 0.3, -1.5113, 'A'};
            break;
        case 6:
            p = {"sui6", {0, -10, -14}, {0, 0, 0}, {0, 14, 20}, {0.4, 0.3, 0.5},
                 0.3, -0.5683, 'A'};
            break;
        default:
            throw std::invalid_argument("sui_profile: model must be 1..6");
    }
    return p;
}

SuiProfile flat_rayleigh_profile() {
    return {"rayleigh", {0}, {0}, {0}, {0.5}, 0.0, 0.0, '-'};
}

ChannelRealization realize_channel(const SuiProfile& profile, int n_tx,
                                   std::size_t duration_samples, double sample_rate,
                                   UpdateMode mode, std::uint64_t seed) {
    validate_profile(profile);
    if (n_tx < 1 || n_tx > 2)
        throw std::invalid_argument("realize_channel: n_tx must be 1 or 2");
    if (sample_rate <= 0.0) throw std::invalid_argument("realize_channel: bad sample rate");
    if (duration_samples == 0) throw std::invalid_argument("realize_channel: empty duration");

    const std::size_t n_taps = profile.n_taps();
    ChannelRealization ch;
    ch.n_tx = n_tx;
    ch.sample_rate = sample_rate;
    ch.duration = duration_samples;
    ch.block_mode = (mode == UpdateMode::block);
    ch.seed = seed;
    ch.tap_delay_samples.resize(n_taps);
    for (std::size_t t = 0; t < n_taps; ++t) {
        ch.tap_delay_samples[t] =
            static_cast<int>(std::lround(profile.tap_delay_us[t] * 1e-6 * sample_rate));
        if (t > 0 && ch.tap_delay_samples[t] <= ch.tap_delay_samples[t - 1])
            throw std::invalid_argument(
                "realize_channel: tap delays collide at this sample rate");
    }

    std::mt19937_64 rng(seed);
    const double rho = profile.antenna_corr;
    const double mix = std::sqrt(std::max(0.0, 1.0 - rho * rho));
    const std::size_t n_gain = ch.block_mode ? 1 : duration_samples;

    ch.gains.assign(static_cast<std::size_t>(n_tx),
                    std::vector<std::vector<cplx>>(n_taps));
    for (std::size_t t = 0; t < n_taps; ++t) {
        const double k = profile.k_factor[t];
        const double p_lin =
            std::pow(10.0, (profile.tap_power_db[t] + profile.gain_norm_db) / 10.0);
        const double los = std::sqrt(p_lin * k / (k + 1.0));
        const double diff_scale = std::sqrt(p_lin / (k + 1.0));

        std::vector<cplx> base, extra;
        if (ch.block_mode) {
            base = {cnormal(rng)};
            extra = {n_tx == 2 ? cnormal(rng) : cplx{}};
        } else {
            base = shaped_process(n_gain, sample_rate, profile.max_doppler_hz[t], rng);
            extra = (n_tx == 2)
                        ? shaped_process(n_gain, sample_rate, profile.max_doppler_hz[t], rng)
                        : std::vector<cplx>(n_gain, cplx{});
        }
        for (int a = 0; a < n_tx; ++a) {
            auto& g = ch.gains[static_cast<std::size_t>(a)][t];
            g.resize(n_gain);
            for (std::size_t i = 0; i < n_gain; ++i) {
                const cplx diffuse = (a == 0) ? base[i] : rho * base[i] + mix * extra[i];
                g[i] = los + diff_scale * diffuse;
            }
        }
    }
    return ch;
}

void apply_channel_accum(std::span<const cplx> x, const ChannelRealization& ch, int antenna,
                         std::span<cplx> y) {
    if (antenna < 0 || antenna >= ch.n_tx)
        throw std::invalid_argument("apply_channel: bad antenna index");
    if (!ch.block_mode && x.size() > ch.duration)
        throw std::invalid_argument("apply_channel: realization shorter than the input");
    if (y.size() != x.size()) throw std::invalid_argument("apply_channel: output size mismatch");

    for (std::size_t t = 0; t < ch.tap_delay_samples.size(); ++t) {
        const std::size_t d = static_cast<std::size_t>(ch.tap_delay_samples[t]);
        if (d >= x.size()) continue;
        if (ch.block_mode) {
            const cplx g = ch.gains[static_cast<std::size_t>(antenna)][t][0];
            kern::caxpy(g, x.data(), y.data() + d, x.size() - d);
        } else {
            const auto& g = ch.gains[static_cast<std::size_t>(antenna)][t];
            for (std::size_t n = d; n < x.size(); ++n) y[n] += g[n] * x[n - d];
        }
    }
}

std::vector<cplx> apply_channel(std::span<const cplx> x, const ChannelRealization& ch,
                                int antenna) {
    std::vector<cplx> y(x.size(), cplx{});
    apply_channel_accum(x, ch, antenna, y);
    return y;
}

std::vector<cplx> freq_response(const ChannelRealization& ch, int antenna, int n_fft) {
    if (antenna < 0 || antenna >= ch.n_tx)
        throw std::invalid_argument("freq_response: bad antenna index");
    if (!ch.block_mode)
        throw std::invalid_argument("freq_response: needs a block-mode realization");
    std::vector<cplx> h(static_cast<std::size_t>(n_fft));
    for (int k = 0; k < n_fft; ++k) {
        cplx acc{};
        for (std::size_t t = 0; t < ch.tap_delay_samples.size(); ++t) {
            const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) *
                               static_cast<double>(ch.tap_delay_samples[t]) /
                               static_cast<double>(n_fft);
            acc += ch.gains[static_cast<std::size_t>(antenna)][t][0] *
                   cplx{std::cos(ang), std::sin(ang)};
        }
        h[static_cast<std::size_t>(k)] = acc;
    }
    return h;
}

void add_awgn(std::span<cplx> x, double snr_db, double signal_power_ref, std::uint64_t seed) {
    if (signal_power_ref <= 0.0)
        throw std::invalid_argument("add_awgn: signal power reference must be positive");
    if (snr_db >= kAwgnSnrCapDb) return;
    const double var = signal_power_ref * std::pow(10.0, -snr_db / 10.0);
    const double sigma = std::sqrt(var * 0.5);
    std::mt19937_64 rng(seed);
    for (auto& v : x) v += sigma * gaussian_pair(rng);
}

namespace {

double log_bessel_i0(double x) {
    if (x < 700.0) return std::log(std::cyl_bessel_i(0.0, x));
    // asymptotic expansion for large argument
    return x - 0.5 * std::log(2.0 * std::numbers::pi * x) +
           std::log1p(1.0 / (8.0 * x) + 9.0 / (128.0 * x * x));
}

} // namespace

double rician_pdf(double r, double sigma_sq, double a_los) {
    if (r < 0.0 || sigma_sq <= 0.0 || a_los < 0.0)
        throw std::invalid_argument("rician_pdf: invalid arguments");
    if (r == 0.0) return 0.0;
    const double log_pdf = std::log(r / sigma_sq) - (r * r + a_los * a_los) / (2.0 * sigma_sq) +
                           log_bessel_i0(r * a_los / sigma_sq);
    return std::exp(log_pdf);
}

} // namespace linksim::channel
