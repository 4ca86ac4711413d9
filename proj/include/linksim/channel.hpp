#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace linksim::channel {

using cplx = std::complex<double>;

// Tapped-delay-line fading profile. The six SUI sets use three taps; the
// flat-Rayleigh reference uses one.
struct SuiProfile {
    std::string name;
    std::vector<double> tap_power_db;
    std::vector<double> k_factor;       // linear Rician K per tap
    std::vector<double> tap_delay_us;
    std::vector<double> max_doppler_hz;
    double antenna_corr = 0.0;          // TX-antenna envelope correlation
    double gain_norm_db = 0.0;
    char terrain = '-';

    std::size_t n_taps() const { return tap_power_db.size(); }
    double max_delay_us() const { return tap_delay_us.empty() ? 0.0 : tap_delay_us.back(); }
};

SuiProfile sui_profile(int model);  // 1..6, verbatim parameter sets
SuiProfile flat_rayleigh_profile();

enum class UpdateMode { block, continuous };

// One channel draw: per-antenna, per-tap complex gain processes plus the
// integer sample delays. Block mode freezes the gains for the whole
// duration; continuous mode carries one gain per sample, shaped by the
// rounded Doppler spectrum S(f) = 1 - 1.72 f0^2 + 0.785 f0^4, |f0| <= 1.
struct ChannelRealization {
    int n_tx = 1;
    std::vector<int> tap_delay_samples;
    std::vector<std::vector<std::vector<cplx>>> gains;  // [antenna][tap][time]
    double sample_rate = 0.0;
    std::size_t duration = 0;
    bool block_mode = true;
    std::uint64_t seed = 0;

    cplx gain_at(int antenna, std::size_t tap, std::size_t n) const {
        const auto& g = gains[static_cast<std::size_t>(antenna)][tap];
        return block_mode ? g[0] : g[n];
    }
};

ChannelRealization realize_channel(const SuiProfile& profile, int n_tx,
                                   std::size_t duration_samples, double sample_rate,
                                   UpdateMode mode, std::uint64_t seed);

// y(n) = sum_k g_k(n) x(n - d_k), same length as x.
std::vector<cplx> apply_channel(std::span<const cplx> x, const ChannelRealization& ch,
                                int antenna);
void apply_channel_accum(std::span<const cplx> x, const ChannelRealization& ch, int antenna,
                         std::span<cplx> y);

// Per-bin frequency response of a block-mode realization.
std::vector<cplx> freq_response(const ChannelRealization& ch, int antenna, int n_fft);

// Adds circular complex Gaussian noise with total variance
// signal_power_ref / 10^(snr_db/10). SNR above the cap adds nothing.
inline constexpr double kAwgnSnrCapDb = 250.0;
void add_awgn(std::span<cplx> x, double snr_db, double signal_power_ref, std::uint64_t seed);

// Rician envelope density with LOS amplitude a_los; a_los = 0 degenerates to
// the Rayleigh density.
double rician_pdf(double r, double sigma_sq, double a_los);

double rounded_doppler_psd(double f, double f_max);

} // namespace linksim::channel
