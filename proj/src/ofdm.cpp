#include "linksim/ofdm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "linksim/kernels/kernels.hpp"

namespace linksim::ofdm {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

} // namespace

FftPlan::FftPlan(std::size_t n) : n_(n) {
    if (!is_pow2(n)) throw std::invalid_argument("FftPlan: size must be a power of two");
    twiddle_.resize(std::max<std::size_t>(n / 2, 1));
    for (std::size_t k = 0; k < twiddle_.size(); ++k) {
        const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) /
                           static_cast<double>(n);
        twiddle_[k] = {std::cos(ang), std::sin(ang)};
    }
    bitrev_.resize(n);
    std::size_t bits = 0;
    for (std::size_t t = n; t > 1; t >>= 1) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0, v = i;
        for (std::size_t b = 0; b < bits; ++b) {
            r = (r << 1) | (v & 1);
            v >>= 1;
        }
        bitrev_[i] = static_cast<std::uint32_t>(r);
    }
}

void fft_inplace(std::span<cplx> x, const FftPlan& plan) {
    const std::size_t n = plan.size();
    if (x.size() != n) throw std::invalid_argument("fft: length does not match plan");
    const auto& rev = plan.bitrev();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = rev[i];
        if (j > i) std::swap(x[i], x[j]);
    }
    const cplx* tw = plan.twiddle().data();
    for (std::size_t len = 2; len <= n; len <<= 1)
        kern::fft_stage(x.data(), tw, n, len, n / len);
}

void ifft_inplace(std::span<cplx> x, const FftPlan& plan) {
    for (auto& v : x) v = std::conj(v);
    fft_inplace(x, plan);
    const double s = 1.0 / static_cast<double>(plan.size());
    for (auto& v : x) v = std::conj(v) * s;
}

std::vector<cplx> fft(std::vector<cplx> x) {
    FftPlan plan(x.size());
    fft_inplace(x, plan);
    return x;
}

std::vector<cplx> ifft(std::vector<cplx> x) {
    FftPlan plan(x.size());
    ifft_inplace(x, plan);
    return x;
}

const AllocationPlan& AllocationPlan::wimax512() {
    static const AllocationPlan plan = [] {
        AllocationPlan p;
        p.n_fft = 512;
        p.roles.assign(512, Role::null_carrier);
        // active pairs (k, 511-k) for k = 2..253; null pairs k in {0,1,254,255}
        // guard DC and the band edge
        std::vector<int> primaries;
        for (int k = 2; k <= 253; ++k) primaries.push_back(k);
        // 60-pilot comb over the 252 primaries
        std::vector<bool> is_pilot(primaries.size(), false);
        for (int i = 0; i < 60; ++i) {
            const int pos = static_cast<int>(std::lround(i * 252.0 / 60.0));
            is_pilot[static_cast<std::size_t>(pos)] = true;
        }
        for (std::size_t i = 0; i < primaries.size(); ++i) {
            const int k = primaries[i];
            if (is_pilot[i]) {
                p.pilot_indices.push_back(k);
                p.roles[static_cast<std::size_t>(k)] = Role::pilot;
            } else {
                p.data_indices.push_back(k);
                p.roles[static_cast<std::size_t>(k)] = Role::data;
            }
            p.roles[static_cast<std::size_t>(p.mirror_of(k))] = Role::mirror;
        }
        return p;
    }();
    return plan;
}

SubcarrierFrame assemble_symbol(std::span<const cplx> data, std::span<const cplx> pilots,
                                const AllocationPlan& plan) {
    if (data.size() != plan.data_indices.size() ||
        pilots.size() != plan.pilot_indices.size())
        throw std::invalid_argument("assemble_symbol: length mismatch with plan");
    SubcarrierFrame f;
    f.n_fft = plan.n_fft;
    f.values.assign(static_cast<std::size_t>(plan.n_fft), cplx{});
    for (std::size_t i = 0; i < data.size(); ++i)
        f.values[static_cast<std::size_t>(plan.data_indices[i])] = data[i];
    for (std::size_t i = 0; i < pilots.size(); ++i)
        f.values[static_cast<std::size_t>(plan.pilot_indices[i])] = pilots[i];
    return f;
}

IqBuffer add_cp(const IqBuffer& symbol, int cp_len) {
    const std::size_t n = symbol.samples.size();
    if (cp_len <= 0 || static_cast<std::size_t>(cp_len) >= n)
        throw std::invalid_argument("add_cp: cp_len out of range");
    const std::size_t ratio = n / static_cast<std::size_t>(cp_len);
    if (n % static_cast<std::size_t>(cp_len) != 0 ||
        (ratio != 4 && ratio != 8 && ratio != 16 && ratio != 32))
        throw std::invalid_argument("add_cp: cp_len must be body/{4,8,16,32}");
    IqBuffer out;
    out.sample_rate = symbol.sample_rate;
    out.cp_len = cp_len;
    out.samples.reserve(n + static_cast<std::size_t>(cp_len));
    out.samples.insert(out.samples.end(), symbol.samples.end() - cp_len, symbol.samples.end());
    out.samples.insert(out.samples.end(), symbol.samples.begin(), symbol.samples.end());
    return out;
}

IqBuffer strip_cp(const IqBuffer& buf) {
    if (buf.cp_len <= 0 || static_cast<std::size_t>(buf.cp_len) >= buf.samples.size())
        throw std::invalid_argument("strip_cp: no valid cyclic prefix");
    IqBuffer out;
    out.sample_rate = buf.sample_rate;
    out.cp_len = 0;
    out.samples.assign(buf.samples.begin() + buf.cp_len, buf.samples.end());
    return out;
}

void apply_cfo(std::span<cplx> x, double epsilon, int n_fft, std::int64_t start_index) {
    if (epsilon == 0.0) return;
    const double w = 2.0 * std::numbers::pi * epsilon / static_cast<double>(n_fft);
    // chunked rotation: one sincos per sample only inside a phasor table,
    // then vector complex multiplies with an exact per-chunk anchor phase
    constexpr std::size_t kChunk = 512;
    cplx table[kChunk];
    const std::size_t chunk = std::min<std::size_t>(kChunk, x.size());
    for (std::size_t u = 0; u < chunk; ++u) {
        const double ang = w * static_cast<double>(u);
        table[u] = {std::cos(ang), std::sin(ang)};
    }
    for (std::size_t base = 0; base < x.size(); base += chunk) {
        const std::size_t n = std::min(chunk, x.size() - base);
        const double ang =
            w * static_cast<double>(start_index + static_cast<std::int64_t>(base));
        const cplx anchor{std::cos(ang), std::sin(ang)};
        kern::cmul_scaled(x.data() + base, table, anchor, x.data() + base, n);
    }
}

PilotPlan compute_pilot_spacing(double delta_f, double t_s, double tau_max) {
    if (delta_f <= 0.0 || t_s <= 0.0 || tau_max <= 0.0)
        throw std::invalid_argument("compute_pilot_spacing: inputs must be positive");
    PilotPlan p;
    p.delta_f = delta_f;
    p.t_s = t_s;
    p.tau_max = tau_max;
    p.npt = std::max(1, static_cast<int>(std::floor(1.0 / (delta_f * t_s))));
    p.npf = std::max(1, static_cast<int>(std::floor(1.0 / (delta_f * tau_max))));
    return p;
}

} // namespace linksim::ofdm
