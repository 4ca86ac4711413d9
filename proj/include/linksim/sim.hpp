#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "linksim/channel.hpp"
#include "linksim/ici.hpp"
#include "linksim/mapping.hpp"
#include "linksim/ofdm.hpp"

namespace linksim::sim {

enum class ChannelModel { ideal, awgn, rayleigh, sui1, sui2, sui3, sui4, sui5, sui6 };

const char* channel_name(ChannelModel m);
std::optional<ChannelModel> parse_channel(std::string_view s);
std::optional<ici::Scheme> parse_scheme(std::string_view s);
std::optional<mapping::Modulation> parse_modulation(std::string_view s);

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LinkConfig {
    ici::Scheme scheme = ici::Scheme::pascs;
    mapping::Modulation modulation = mapping::Modulation::qpsk;
    ChannelModel channel = ChannelModel::sui1;
    double epsilon = 0.0;
    bool cfo_correction = false;
    std::vector<double> snr_grid_db = {10.0};
    int n_frames = 100;
    int cp_denominator = 4;  // cp_len = n_fft / cp_denominator
    double sample_rate_hz = 4.0e6;
    int n_fft = 512;
    int symbols_per_frame = 48;  // one 5 ms frame
    std::uint64_t seed = 1;
    int n_threads = 0;  // 0 = hardware concurrency
    double carrier_freq_ghz = 5.0;  // metadata only, no effect at baseband

    int cp_len() const { return n_fft / cp_denominator; }
    const ofdm::AllocationPlan& allocation() const { return ofdm::AllocationPlan::wimax512(); }
    ici::CancellationScheme cancellation() const;
};

// Throws ConfigError; the message names the offending SUI model when the CP
// cannot cover the channel memory.
void validate(const LinkConfig& cfg);

int coded_bits_per_symbol(const LinkConfig& cfg);
int payload_bits_per_frame(const LinkConfig& cfg);

struct RunResult {
    ici::Scheme scheme{};
    mapping::Modulation modulation{};
    ChannelModel channel{};
    double epsilon = 0.0;
    double snr_db = 0.0;
    std::uint64_t bit_errors = 0;
    std::uint64_t bits_total = 0;
    double ber = 0.0;
    double measured_cir_db = 0.0;  // NaN for BER rows
    double mean_cfo_est = 0.0;     // NaN unless the scheme estimates
    double rms_cfo_err = 0.0;
    double wall_seconds = 0.0;     // not serialized
    std::uint64_t seed = 0;        // per-row seed, reruns the row standalone
};

// Monte-Carlo BER at one SNR point; deterministic given cfg.seed.
RunResult run_link_point(const LinkConfig& cfg, double snr_db);
// One row per cfg.snr_grid_db entry, each from a derived per-row seed.
std::vector<RunResult> run_link(const LinkConfig& cfg);

enum class SweepAxis { snr, epsilon, scheme };
std::vector<RunResult> sweep(const LinkConfig& base, SweepAxis axis,
                             std::span<const double> values);
std::vector<RunResult> sweep_schemes(const LinkConfig& base,
                                     std::span<const ici::Scheme> schemes);

// Noiseless single-antenna CIR measurement: transmits known symbols with the
// scheme's cancelling modulation, applies the offset, and splits received
// power into the part correlated with the known frame and the remainder.
std::vector<RunResult> measure_cir(const LinkConfig& cfg, std::span<const double> epsilon_grid,
                                   int n_symbols = 1000);

void write_csv(std::ostream& os, std::span<const RunResult> rows);
std::string csv_string(std::span<const RunResult> rows);

std::uint64_t splitmix64(std::uint64_t x);

} // namespace linksim::sim
