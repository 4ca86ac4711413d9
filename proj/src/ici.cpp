#include "linksim/ici.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "linksim/bits.hpp"
#include "linksim/mapping.hpp"

namespace linksim::ici {

namespace {

// half-sum of the +/-m leakage pair; the quantity the mirror mapping combines
inline cplx sym_pair(const IciCoefficients& w, long m) {
    return 0.5 * (w.at(m) + w.at(-m));
}

// combined coefficient of the pair carrying carrier `ka` into the mirror
// -differenced decision at carrier `j` (0-based bins, mirror = N-1-k)
inline cplx pair_into_decision(const IciCoefficients& w, int ka, int j) {
    return sym_pair(w, ka - j) - sym_pair(w, ka + j + 1);
}

} // namespace

cplx leakage(int n_fft, double epsilon, double m) {
    if (epsilon == 0.0 && m == std::floor(m)) {
        const long mi = static_cast<long>(m) % n_fft;
        return (mi == 0) ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
    }
    const double n = static_cast<double>(n_fft);
    const double x = m + epsilon;
    const double den = n * std::sin(std::numbers::pi * x / n);
    if (den == 0.0) return cplx{1.0, 0.0};
    const double mag = std::sin(std::numbers::pi * x) / den;
    const double ang = std::numbers::pi * (n - 1.0) * x / n;
    return mag * cplx{std::cos(ang), std::sin(ang)};
}

IciCoefficients ici_coefficients(int n_fft, double epsilon) {
    if (n_fft < 2 || (n_fft & (n_fft - 1)) != 0)
        throw std::invalid_argument("ici_coefficients: n_fft must be a power of two");
    if (std::abs(epsilon) >= 1.0)
        throw std::invalid_argument("ici_coefficients: |epsilon| must be < 1");
    IciCoefficients c;
    c.n_fft = n_fft;
    c.epsilon = epsilon;
    c.w.resize(static_cast<std::size_t>(2 * n_fft - 1));
    for (long m = -(n_fft - 1); m <= n_fft - 1; ++m)
        c.w[static_cast<std::size_t>(m + n_fft - 1)] =
            leakage(n_fft, epsilon, static_cast<double>(m));
    return c;
}

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::standard: return "standard";
        case Scheme::scm: return "scm";
        case Scheme::pascs: return "pascs";
    }
    return "?";
}

std::vector<cplx> pilot_sequence(std::size_t n) {
    const auto prbs = bits::prbs15(0x7FFF, 2 * n);
    const auto& qpsk = mapping::Constellation::get(mapping::Modulation::qpsk);
    return mapping::map_bits(prbs, qpsk);
}

void modulate_cancelling(SubcarrierFrame& frame, const AllocationPlan& plan,
                         const CancellationScheme& scheme) {
    if (!scheme.mirrored()) return;
    if (scheme.kind == Scheme::pascs && scheme.n_pilot < 2)
        throw std::invalid_argument("modulate_cancelling: pascs needs at least 2 pilots");
    auto mirror_copy = [&](int k) {
        const int mk = plan.mirror_of(k);
        if (frame.values[static_cast<std::size_t>(mk)] != cplx{})
            throw std::invalid_argument("modulate_cancelling: mirror bin already occupied");
        frame.values[static_cast<std::size_t>(mk)] = -frame.values[static_cast<std::size_t>(k)];
    };
    for (int k : plan.data_indices) mirror_copy(k);
    for (int k : plan.pilot_indices) mirror_copy(k);
}

cplx decision_at(std::span<const cplx> bins, const AllocationPlan& plan,
                 const CancellationScheme& scheme, int carrier) {
    const auto k = static_cast<std::size_t>(carrier);
    if (!scheme.mirrored()) return bins[k];
    return 0.5 * (bins[k] - bins[static_cast<std::size_t>(plan.mirror_of(carrier))]);
}

std::vector<cplx> demodulate_cancelling(std::span<const cplx> bins, const AllocationPlan& plan,
                                        const CancellationScheme& scheme) {
    if (bins.size() != static_cast<std::size_t>(plan.n_fft))
        throw std::invalid_argument("demodulate_cancelling: bin count != n_fft");
    std::vector<cplx> out;
    out.reserve(plan.data_indices.size() + plan.pilot_indices.size());
    for (int k : plan.data_indices) out.push_back(decision_at(bins, plan, scheme, k));
    for (int k : plan.pilot_indices) out.push_back(decision_at(bins, plan, scheme, k));
    return out;
}

SubcarrierFrame insert_pilots(std::span<const cplx> data_syms, std::span<const cplx> pilot_syms,
                              const AllocationPlan& plan) {
    return ofdm::assemble_symbol(data_syms, pilot_syms, plan);
}

CirBreakdown theoretical_cir(int n_fft, double epsilon, const CancellationScheme& scheme,
                             const AllocationPlan& plan) {
    if (std::abs(epsilon) >= 0.5)
        throw std::invalid_argument("theoretical_cir: |epsilon| must be < 0.5");
    const auto w = ici_coefficients(n_fft, epsilon);
    const auto pilots = pilot_sequence(plan.pilot_indices.size());
    const bool mirrored = scheme.mirrored();

    CirBreakdown r;
    for (int j : plan.data_indices) {
        const cplx c_self = mirrored ? pair_into_decision(w, j, j) : w.at(0);
        r.signal_power += std::norm(c_self);
        for (int k : plan.data_indices) {
            if (k == j) continue;
            const cplx c = mirrored ? pair_into_decision(w, k, j) : w.at(k - j);
            r.ici_data_power += std::norm(c);
        }
        cplx b{};
        for (std::size_t p = 0; p < plan.pilot_indices.size(); ++p) {
            const int k = plan.pilot_indices[p];
            const cplx c = mirrored ? pair_into_decision(w, k, j) : w.at(k - j);
            b += pilots[p] * c;
        }
        r.ici_pilot_power += std::norm(b);
    }
    const double interference = r.ici_data_power + r.ici_pilot_power;
    if (interference <= r.signal_power * 1e-30)
        r.cir_db = kCirCapDb;
    else
        r.cir_db = std::min(kCirCapDb, 10.0 * std::log10(r.signal_power / interference));
    return r;
}

CoefficientSets combined_coefficient_sets(int n_fft, double epsilon, int decision_bin,
                                          const AllocationPlan& plan) {
    const auto w = ici_coefficients(n_fft, epsilon);
    CoefficientSets s;
    for (int ka = 0; ka < plan.n_fft; ++ka) {
        const auto role = plan.roles[static_cast<std::size_t>(ka)];
        if (role != ofdm::Role::data && role != ofdm::Role::pilot) continue;
        if (ka == decision_bin) continue;
        s.carrier.push_back(ka);
        s.raw.push_back(std::abs(w.at(ka - decision_bin)));
        s.once.push_back(std::abs(w.at(ka - decision_bin) -
                                  w.at(plan.mirror_of(ka) - decision_bin)));
        s.twice.push_back(std::abs(pair_into_decision(w, ka, decision_bin)));
    }
    return s;
}

} // namespace linksim::ici
