#include "linksim/sim.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "linksim/bits.hpp"
#include "linksim/cfo.hpp"
#include "linksim/kernels/kernels.hpp"
#include "linksim/stbc.hpp"

namespace linksim::sim {

namespace {

using cplx = std::complex<double>;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::uint64_t mix(std::uint64_t a, std::uint64_t b) { return splitmix64(a ^ splitmix64(b)); }

const channel::SuiProfile* fading_profile(ChannelModel m) {
    static const channel::SuiProfile rayleigh = channel::flat_rayleigh_profile();
    static const channel::SuiProfile sui[6] = {
        channel::sui_profile(1), channel::sui_profile(2), channel::sui_profile(3),
        channel::sui_profile(4), channel::sui_profile(5), channel::sui_profile(6)};
    switch (m) {
        case ChannelModel::ideal:
        case ChannelModel::awgn: return nullptr;
        case ChannelModel::rayleigh: return &rayleigh;
        default: return &sui[static_cast<int>(m) - static_cast<int>(ChannelModel::sui1)];
    }
}

// Everything reused across the frames a worker processes.
struct Workspace {
    explicit Workspace(const LinkConfig& cfg)
        : plan(static_cast<std::size_t>(cfg.n_fft)),
          alloc(cfg.allocation()),
          constellation(mapping::Constellation::get(cfg.modulation)),
          pilots(ici::pilot_sequence(alloc.pilot_indices.size())) {
        pilot_bearing.assign(static_cast<std::size_t>(alloc.n_fft), false);
        for (int k : alloc.pilot_indices) {
            pilot_bearing[static_cast<std::size_t>(k)] = true;
            pilot_bearing[static_cast<std::size_t>(alloc.mirror_of(k))] = true;
        }
    }
    ofdm::FftPlan plan;
    const ofdm::AllocationPlan& alloc;
    const mapping::Constellation& constellation;
    std::vector<cplx> pilots;
    std::vector<bool> pilot_bearing;
};

struct FrameStats {
    std::uint64_t bit_errors = 0;
    std::uint64_t bits = 0;
    double cfo_est = kNan;  // this frame's estimate, NaN if unavailable
};

// Per-symbol common-phase reference from the pilot bins: with CFO the whole
// spectrum of symbol s carries the accumulated rotation e^{j theta_s}; the
// receiver re-anchors each symbol on the known pilots (and known channel)
// before Alamouti combining, as a WiMAX receiver does.
void track_common_phase(std::vector<cplx>& bins, const Workspace& ws,
                        std::span<const cplx> h_sum_pilot,
                        const ici::CancellationScheme& scheme) {
    cplx acc{};
    for (std::size_t p = 0; p < ws.alloc.pilot_indices.size(); ++p) {
        const int k = ws.alloc.pilot_indices[p];
        acc += bins[static_cast<std::size_t>(k)] * std::conj(h_sum_pilot[p] * ws.pilots[p]);
        if (scheme.mirrored()) {
            const int mk = ws.alloc.mirror_of(k);
            acc += bins[static_cast<std::size_t>(mk)] *
                   std::conj(h_sum_pilot[ws.alloc.pilot_indices.size() + p] * -ws.pilots[p]);
        }
    }
    if (acc == cplx{}) return;
    const cplx rot = std::conj(acc) / std::abs(acc);
    for (auto& v : bins) v *= rot;
}

FrameStats process_frame(const LinkConfig& cfg, double snr_db, std::uint64_t frame_seed,
                         const Workspace& ws) {
    const auto& alloc = ws.alloc;
    const auto& constellation = ws.constellation;
    const int n_fft = cfg.n_fft;
    const int cp = cfg.cp_len();
    const int sym_len = n_fft + cp;
    const int n_sym = cfg.symbols_per_frame;
    const int bps = constellation.bits_per_symbol;
    const int cps = alloc.n_data() * bps;  // coded bits per OFDM symbol
    const int rows = cps / 16;
    const std::size_t frame_samples = static_cast<std::size_t>(n_sym) * sym_len;
    const auto scheme = cfg.cancellation();

    std::mt19937_64 data_rng(mix(frame_seed, 0xd47a));
    const std::uint64_t chan_seed = mix(frame_seed, 0xc4a7);
    const std::uint64_t noise_seed = mix(frame_seed, 0x7015);

    // ---- transmit bits ----
    const int payload_len = payload_bits_per_frame(cfg);
    bits::BitBlock payload(static_cast<std::size_t>(payload_len));
    for (auto& b : payload) b = static_cast<std::uint8_t>(data_rng() & 1u);
    const auto scrambled = bits::randomize(payload);
    const auto coded = bits::conv_encode(scrambled);

    // ---- per-symbol constellation mapping ----
    std::vector<std::vector<cplx>> tx_syms(static_cast<std::size_t>(n_sym));
    for (int s = 0; s < n_sym; ++s) {
        bits::BitBlock block(coded.begin() + static_cast<std::ptrdiff_t>(s) * cps,
                             coded.begin() + static_cast<std::ptrdiff_t>(s + 1) * cps);
        tx_syms[static_cast<std::size_t>(s)] =
            mapping::map_bits(bits::interleave(block, rows, 16), constellation);
    }

    // ---- subcarrier frames with cancelling modulation ----
    std::vector<std::vector<cplx>> tx_frames(static_cast<std::size_t>(n_sym));
    for (int s = 0; s < n_sym; ++s) {
        auto frame = ici::insert_pilots(tx_syms[static_cast<std::size_t>(s)], ws.pilots, alloc);
        ici::modulate_cancelling(frame, alloc, scheme);
        tx_frames[static_cast<std::size_t>(s)] = std::move(frame.values);
    }

    // ---- Alamouti encoding across symbol pairs; pilots repeat unencoded ----
    std::vector<cplx> ant1(frame_samples), ant2(frame_samples);
    std::vector<cplx> spec1(static_cast<std::size_t>(n_fft)),
        spec2(static_cast<std::size_t>(n_fft));
    for (int s = 0; s < n_sym; s += 2) {
        const auto& fa = tx_frames[static_cast<std::size_t>(s)];
        const auto& fb = tx_frames[static_cast<std::size_t>(s + 1)];
        for (int k = 0; k < n_fft; ++k) {
            const auto ki = static_cast<std::size_t>(k);
            const auto enc = stbc::stbc_encode(fa[ki], fb[ki]);
            spec1[ki] = enc.slot1_ant1;
            spec2[ki] = enc.slot1_ant2;
            if (ws.pilot_bearing[ki]) {
                spec1[ki] = fa[ki];
                spec2[ki] = fa[ki];
            }
        }
        auto emit = [&](int sym_index, std::vector<cplx>& spec, std::vector<cplx>& out) {
            ofdm::ifft_inplace(spec, ws.plan);
            cplx* dst = out.data() + static_cast<std::size_t>(sym_index) * sym_len;
            std::copy_n(spec.end() - cp, cp, dst);
            std::copy_n(spec.begin(), static_cast<std::size_t>(n_fft), dst + cp);
        };
        emit(s, spec1, ant1);
        emit(s, spec2, ant2);
        for (int k = 0; k < n_fft; ++k) {
            const auto ki = static_cast<std::size_t>(k);
            const auto enc = stbc::stbc_encode(fa[ki], fb[ki]);
            spec1[ki] = enc.slot2_ant1;
            spec2[ki] = enc.slot2_ant2;
            if (ws.pilot_bearing[ki]) {
                spec1[ki] = fa[ki];
                spec2[ki] = fa[ki];
            }
        }
        emit(s + 1, spec1, ant1);
        emit(s + 1, spec2, ant2);
    }

    // ---- channel ----
    std::vector<cplx> rx(frame_samples, cplx{});
    std::vector<cplx> h1(static_cast<std::size_t>(n_fft), cplx{1.0, 0.0});
    std::vector<cplx> h2 = h1;
    const channel::SuiProfile* profile = fading_profile(cfg.channel);
    if (profile != nullptr) {
        const auto ch = channel::realize_channel(*profile, 2, frame_samples,
                                                 cfg.sample_rate_hz,
                                                 channel::UpdateMode::block, chan_seed);
        channel::apply_channel_accum(ant1, ch, 0, rx);
        channel::apply_channel_accum(ant2, ch, 1, rx);
        h1 = channel::freq_response(ch, 0, n_fft);
        h2 = channel::freq_response(ch, 1, n_fft);
    } else {
        for (std::size_t i = 0; i < frame_samples; ++i) rx[i] = ant1[i] + ant2[i];
    }

    // ---- impairments ----
    // snr_db is Es/N0 per primary carrier: the mean received power is spread
    // over n_fft bins but the payload occupies the 252 primaries (mirror
    // copies are part of each scheme's redundancy), so the noise reference
    // scales by n_fft / n_primary. All schemes see the same per-bit energy.
    ofdm::apply_cfo(rx, cfg.epsilon, n_fft, 0);
    const double n_primary = static_cast<double>(alloc.n_data() + alloc.n_pilot());
    const double p_ref = kern::energy(rx.data(), rx.size()) / static_cast<double>(rx.size()) *
                         static_cast<double>(n_fft) / n_primary;
    if (p_ref > 0.0) channel::add_awgn(rx, snr_db, p_ref, noise_seed);

    // ---- CFO estimation from repeated pilots (pilot-aided scheme only) ----
    FrameStats stats;
    if (scheme.kind == ici::Scheme::pascs) {
        std::vector<cplx> window(static_cast<std::size_t>(n_fft));
        std::vector<cplx> prev(alloc.pilot_indices.size());
        std::vector<cplx> cur(alloc.pilot_indices.size());
        cplx cross{};
        for (int s = 0; s < n_sym; ++s) {
            const cplx* start = rx.data() + static_cast<std::size_t>(s) * sym_len + cp;
            std::copy_n(start, n_fft, window.begin());
            ofdm::fft_inplace(window, ws.plan);
            for (std::size_t p = 0; p < cur.size(); ++p)
                cur[p] = window[static_cast<std::size_t>(alloc.pilot_indices[p])];
            if (s > 0)
                for (std::size_t p = 0; p < cur.size(); ++p)
                    cross += std::conj(prev[p]) * cur[p];
            prev.swap(cur);
        }
        const auto est = cfo::estimate_cfo_from_sum(
            cross, static_cast<int>(alloc.pilot_indices.size()), sym_len, n_fft);
        if (est.has_value()) {
            stats.cfo_est = est->epsilon_hat;
            if (cfg.cfo_correction) cfo::correct_cfo(rx, *est, n_fft, 0);
        }
    }

    // ---- per-symbol FFT + pilot-referenced phase tracking ----
    std::vector<cplx> h_sum_pilot;  // (h1+h2) at pilot bins, then at their mirrors
    h_sum_pilot.reserve(2 * alloc.pilot_indices.size());
    for (int k : alloc.pilot_indices)
        h_sum_pilot.push_back(h1[static_cast<std::size_t>(k)] + h2[static_cast<std::size_t>(k)]);
    for (int k : alloc.pilot_indices) {
        const auto mk = static_cast<std::size_t>(alloc.mirror_of(k));
        h_sum_pilot.push_back(h1[mk] + h2[mk]);
    }

    std::vector<std::vector<cplx>> rx_spec(static_cast<std::size_t>(n_sym));
    for (int s = 0; s < n_sym; ++s) {
        auto& spec = rx_spec[static_cast<std::size_t>(s)];
        spec.resize(static_cast<std::size_t>(n_fft));
        std::copy_n(rx.data() + static_cast<std::size_t>(s) * sym_len + cp, n_fft, spec.begin());
        ofdm::fft_inplace(spec, ws.plan);
        track_common_phase(spec, ws, h_sum_pilot, scheme);
    }

    // ---- combining, decisions, decoding ----
    std::vector<double> alpha(static_cast<std::size_t>(n_fft));
    for (int k = 0; k < n_fft; ++k)
        alpha[static_cast<std::size_t>(k)] = std::norm(h1[static_cast<std::size_t>(k)]) +
                                             std::norm(h2[static_cast<std::size_t>(k)]);

    bits::BitBlock rx_coded(coded.size());
    std::vector<cplx> comb_a(static_cast<std::size_t>(n_fft)),
        comb_b(static_cast<std::size_t>(n_fft));
    bits::BitBlock sym_bits(static_cast<std::size_t>(cps));
    for (int s = 0; s < n_sym; s += 2) {
        kern::stbc_combine(rx_spec[static_cast<std::size_t>(s)].data(),
                           rx_spec[static_cast<std::size_t>(s + 1)].data(), h1.data(), h2.data(),
                           comb_a.data(), comb_b.data(), static_cast<std::size_t>(n_fft));
        auto decide_symbol = [&](const std::vector<cplx>& comb, int sym_index) {
            for (std::size_t d = 0; d < alloc.data_indices.size(); ++d) {
                const int k = alloc.data_indices[d];
                const auto ki = static_cast<std::size_t>(k);
                cplx dec;
                double gain;
                if (scheme.mirrored()) {
                    const auto mi = static_cast<std::size_t>(alloc.mirror_of(k));
                    dec = 0.5 * (comb[ki] - comb[mi]);
                    gain = 0.5 * (alpha[ki] + alpha[mi]);
                } else {
                    dec = comb[ki];
                    gain = alpha[ki];
                }
                const auto decision = stbc::stbc_ml_decide(dec, gain, constellation);
                for (int b = 0; b < bps; ++b)
                    sym_bits[d * static_cast<std::size_t>(bps) + static_cast<std::size_t>(b)] =
                        static_cast<std::uint8_t>((decision.label >> (bps - 1 - b)) & 1u);
            }
            const auto deint = bits::deinterleave(sym_bits, rows, 16);
            std::copy(deint.begin(), deint.end(),
                      rx_coded.begin() + static_cast<std::ptrdiff_t>(sym_index) * cps);
        };
        decide_symbol(comb_a, s);
        decide_symbol(comb_b, s + 1);
    }

    const auto decoded = bits::viterbi_decode(rx_coded);
    const auto descrambled = bits::randomize(decoded);
    const auto ec = bits::count_bit_errors(payload, descrambled);
    stats.bit_errors = ec.errors;
    stats.bits = ec.total;
    return stats;
}

void format_double(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    out += buf;
}

} // namespace

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

const char* channel_name(ChannelModel m) {
    switch (m) {
        case ChannelModel::ideal: return "ideal";
        case ChannelModel::awgn: return "awgn";
        case ChannelModel::rayleigh: return "rayleigh";
        case ChannelModel::sui1: return "sui1";
        case ChannelModel::sui2: return "sui2";
        case ChannelModel::sui3: return "sui3";
        case ChannelModel::sui4: return "sui4";
        case ChannelModel::sui5: return "sui5";
        case ChannelModel::sui6: return "sui6";
    }
    return "?";
}

std::optional<ChannelModel> parse_channel(std::string_view s) {
    for (int i = 0; i <= static_cast<int>(ChannelModel::sui6); ++i)
        if (s == channel_name(static_cast<ChannelModel>(i)))
            return static_cast<ChannelModel>(i);
    return std::nullopt;
}

std::optional<ici::Scheme> parse_scheme(std::string_view s) {
    if (s == "standard") return ici::Scheme::standard;
    if (s == "scm") return ici::Scheme::scm;
    if (s == "pascs") return ici::Scheme::pascs;
    return std::nullopt;
}

std::optional<mapping::Modulation> parse_modulation(std::string_view s) {
    if (s == "qpsk") return mapping::Modulation::qpsk;
    if (s == "qam16") return mapping::Modulation::qam16;
    if (s == "qam64") return mapping::Modulation::qam64;
    return std::nullopt;
}

ici::CancellationScheme LinkConfig::cancellation() const {
    ici::CancellationScheme s;
    s.kind = scheme;
    s.n_pilot = (scheme == ici::Scheme::pascs) ? allocation().n_pilot() : 0;
    return s;
}

int coded_bits_per_symbol(const LinkConfig& cfg) {
    return cfg.allocation().n_data() * mapping::bits_per_symbol(cfg.modulation);
}

int payload_bits_per_frame(const LinkConfig& cfg) {
    const int coded = cfg.symbols_per_frame * coded_bits_per_symbol(cfg);
    return coded / 2 - bits::CodecSpec{}.tail_bits();
}

void validate(const LinkConfig& cfg) {
    if (cfg.n_fft != 512) throw ConfigError("config: n_fft must be 512");
    if (cfg.n_frames < 1) throw ConfigError("config: n_frames must be >= 1");
    if (cfg.symbols_per_frame < 2 || cfg.symbols_per_frame % 2 != 0)
        throw ConfigError("config: symbols per frame must be even and >= 2");
    if (cfg.cp_denominator != 4 && cfg.cp_denominator != 8 && cfg.cp_denominator != 16 &&
        cfg.cp_denominator != 32)
        throw ConfigError("config: cp fraction must be 1/4, 1/8, 1/16 or 1/32");
    if (cfg.sample_rate_hz <= 0.0) throw ConfigError("config: sample rate must be positive");
    if (std::abs(cfg.epsilon) >= 0.5)
        throw ConfigError("config: |epsilon| must be below 0.5 subcarrier spacings");
    if (cfg.snr_grid_db.empty()) throw ConfigError("config: empty SNR grid");
    if (coded_bits_per_symbol(cfg) % 16 != 0)
        throw ConfigError("config: coded bits per symbol not divisible by 16");
    if (cfg.cfo_correction && cfg.scheme != ici::Scheme::pascs)
        throw ConfigError("config: CFO correction requires the pilot-aided scheme (pascs)");
    if (cfg.cfo_correction) {
        const double reach =
            0.5 * cfg.n_fft / static_cast<double>(cfg.n_fft + cfg.cp_len());
        if (std::abs(cfg.epsilon) >= reach) {
            std::ostringstream msg;
            msg << "config: |epsilon| = " << std::abs(cfg.epsilon)
                << " is outside the estimator range " << reach << " for cp 1/"
                << cfg.cp_denominator;
            throw ConfigError(msg.str());
        }
    }
    const channel::SuiProfile* profile = fading_profile(cfg.channel);
    if (profile != nullptr) {
        const double max_delay_samples =
            profile->max_delay_us() * 1e-6 * cfg.sample_rate_hz;
        if (max_delay_samples > cfg.cp_len()) {
            std::ostringstream msg;
            msg << "config: " << profile->name << " max delay "
                << profile->max_delay_us() << " us = " << max_delay_samples
                << " samples exceeds the cyclic prefix of " << cfg.cp_len() << " samples";
            throw ConfigError(msg.str());
        }
    }
}

RunResult run_link_point(const LinkConfig& cfg, double snr_db) {
    validate(cfg);
    const auto t0 = std::chrono::steady_clock::now();

    const int n_frames = cfg.n_frames;
    std::vector<FrameStats> per_frame(static_cast<std::size_t>(n_frames));
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const unsigned n_threads =
        std::min<unsigned>(cfg.n_threads > 0 ? static_cast<unsigned>(cfg.n_threads) : hw,
                           static_cast<unsigned>(n_frames));

    std::atomic<int> next{0};
    auto worker = [&] {
        Workspace ws(cfg);
        for (;;) {
            const int f = next.fetch_add(1);
            if (f >= n_frames) break;
            const std::uint64_t frame_seed = mix(cfg.seed, 0xf4a3e000ULL + static_cast<std::uint64_t>(f));
            per_frame[static_cast<std::size_t>(f)] = process_frame(cfg, snr_db, frame_seed, ws);
        }
    };
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    RunResult r;
    r.scheme = cfg.scheme;
    r.modulation = cfg.modulation;
    r.channel = cfg.channel;
    r.epsilon = cfg.epsilon;
    r.snr_db = snr_db;
    r.measured_cir_db = kNan;
    r.seed = cfg.seed;
    double est_sum = 0.0, err_sq = 0.0;
    int est_n = 0;
    for (const auto& fs : per_frame) {  // fixed order keeps the sums reproducible
        r.bit_errors += fs.bit_errors;
        r.bits_total += fs.bits;
        if (!std::isnan(fs.cfo_est)) {
            est_sum += fs.cfo_est;
            err_sq += (fs.cfo_est - cfg.epsilon) * (fs.cfo_est - cfg.epsilon);
            ++est_n;
        }
    }
    r.ber = r.bits_total ? static_cast<double>(r.bit_errors) / static_cast<double>(r.bits_total)
                         : kNan;
    r.mean_cfo_est = est_n ? est_sum / est_n : kNan;
    r.rms_cfo_err = est_n ? std::sqrt(err_sq / est_n) : kNan;
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::vector<RunResult> run_link(const LinkConfig& cfg) {
    validate(cfg);
    std::vector<RunResult> rows;
    rows.reserve(cfg.snr_grid_db.size());
    for (std::size_t i = 0; i < cfg.snr_grid_db.size(); ++i) {
        LinkConfig point = cfg;
        point.seed = mix(cfg.seed, 0x50a0 + i);
        rows.push_back(run_link_point(point, cfg.snr_grid_db[i]));
    }
    return rows;
}

std::vector<RunResult> sweep(const LinkConfig& base, SweepAxis axis,
                             std::span<const double> values) {
    if (values.empty()) throw ConfigError("sweep: empty value grid");
    std::vector<RunResult> rows;
    std::size_t row = 0;
    for (double v : values) {
        LinkConfig cfg = base;
        cfg.seed = mix(base.seed, 0x51e9 + row++);
        double snr = base.snr_grid_db.front();
        switch (axis) {
            case SweepAxis::snr: snr = v; break;
            case SweepAxis::epsilon: cfg.epsilon = v; break;
            case SweepAxis::scheme:
                throw ConfigError("sweep: use sweep_schemes for the scheme axis");
        }
        rows.push_back(run_link_point(cfg, snr));
    }
    return rows;
}

std::vector<RunResult> sweep_schemes(const LinkConfig& base,
                                     std::span<const ici::Scheme> schemes) {
    if (schemes.empty()) throw ConfigError("sweep: empty value grid");
    std::vector<RunResult> rows;
    std::size_t row = 0;
    for (auto s : schemes) {
        LinkConfig cfg = base;
        cfg.scheme = s;
        if (s != ici::Scheme::pascs) cfg.cfo_correction = false;
        cfg.seed = mix(base.seed, 0x51e9 + row++);
        rows.push_back(run_link_point(cfg, base.snr_grid_db.front()));
    }
    return rows;
}

std::vector<RunResult> measure_cir(const LinkConfig& cfg, std::span<const double> epsilon_grid,
                                   int n_symbols) {
    if (epsilon_grid.empty()) throw ConfigError("measure_cir: empty epsilon grid");
    if (n_symbols < 8) throw ConfigError("measure_cir: too few symbols");
    const auto& alloc = cfg.allocation();
    const auto& constellation = mapping::Constellation::get(cfg.modulation);
    const auto pilots = ici::pilot_sequence(alloc.pilot_indices.size());
    const auto scheme = cfg.cancellation();
    ofdm::FftPlan plan(static_cast<std::size_t>(cfg.n_fft));

    std::vector<RunResult> rows;
    for (std::size_t gi = 0; gi < epsilon_grid.size(); ++gi) {
        const double eps = epsilon_grid[gi];
        std::mt19937_64 rng(mix(cfg.seed, 0xc19 + gi));
        const std::size_t n_data = alloc.data_indices.size();

        // accumulate per-carrier correlation of decisions with the known data
        std::vector<cplx> corr(n_data, cplx{});
        std::vector<double> tx_pow(n_data, 0.0);
        std::vector<std::vector<cplx>> tx(n_symbols), dec(n_symbols);
        std::vector<cplx> spec(static_cast<std::size_t>(cfg.n_fft));
        for (int s = 0; s < n_symbols; ++s) {
            auto& d = tx[static_cast<std::size_t>(s)];
            d.resize(n_data);
            for (auto& v : d)
                v = constellation.points[rng() % constellation.points.size()];
            auto frame = ici::insert_pilots(d, pilots, alloc);
            ici::modulate_cancelling(frame, alloc, scheme);
            spec = std::move(frame.values);
            ofdm::ifft_inplace(spec, plan);
            ofdm::apply_cfo(spec, eps, cfg.n_fft, 0);
            ofdm::fft_inplace(spec, plan);
            const auto all = ici::demodulate_cancelling(spec, alloc, scheme);
            dec[static_cast<std::size_t>(s)].assign(all.begin(),
                                                    all.begin() + static_cast<std::ptrdiff_t>(n_data));
            for (std::size_t i = 0; i < n_data; ++i) {
                corr[i] += dec[static_cast<std::size_t>(s)][i] * std::conj(d[i]);
                tx_pow[i] += std::norm(d[i]);
            }
        }
        double sig = 0.0, intf = 0.0;
        for (int s = 0; s < n_symbols; ++s) {
            for (std::size_t i = 0; i < n_data; ++i) {
                const cplx c = corr[i] / tx_pow[i];
                const cplx desired = c * tx[static_cast<std::size_t>(s)][i];
                sig += std::norm(desired);
                intf += std::norm(dec[static_cast<std::size_t>(s)][i] - desired);
            }
        }
        RunResult r;
        r.scheme = cfg.scheme;
        r.modulation = cfg.modulation;
        r.channel = ChannelModel::ideal;
        r.epsilon = eps;
        r.snr_db = kNan;
        r.ber = kNan;
        r.mean_cfo_est = kNan;
        r.rms_cfo_err = kNan;
        r.seed = cfg.seed;
        r.measured_cir_db = (intf <= sig * 1e-30)
                                ? ici::kCirCapDb
                                : std::min(ici::kCirCapDb, 10.0 * std::log10(sig / intf));
        rows.push_back(r);
    }
    return rows;
}

std::string csv_string(std::span<const RunResult> rows) {
    std::string out =
        "scheme,modulation,channel,epsilon,snr_db,bit_errors,bits_total,ber,"
        "measured_cir_db,mean_cfo_est,rms_cfo_err,seed\n";
    for (const auto& r : rows) {
        out += ici::scheme_name(r.scheme);
        out += ',';
        out += mapping::modulation_name(r.modulation);
        out += ',';
        out += channel_name(r.channel);
        out += ',';
        format_double(out, r.epsilon);
        out += ',';
        format_double(out, r.snr_db);
        out += ',';
        out += std::to_string(r.bit_errors);
        out += ',';
        out += std::to_string(r.bits_total);
        out += ',';
        format_double(out, r.ber);
        out += ',';
        format_double(out, r.measured_cir_db);
        out += ',';
        format_double(out, r.mean_cfo_est);
        out += ',';
        format_double(out, r.rms_cfo_err);
        out += ',';
        out += std::to_string(r.seed);
        out += '\n';
    }
    return out;
}

void write_csv(std::ostream& os, std::span<const RunResult> rows) {
    os << csv_string(rows);
}

} // namespace linksim::sim
