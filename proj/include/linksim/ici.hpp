#pragma once

#include <complex>
#include <span>
#include <vector>

#include "linksim/ofdm.hpp"

namespace linksim::ici {

using cplx = std::complex<double>;
using ofdm::AllocationPlan;
using ofdm::SubcarrierFrame;

// CIR values reported once interference underflows (epsilon -> 0).
inline constexpr double kCirCapDb = 300.0;

// DFT leakage of a tone offset by epsilon bins onto a carrier m bins away:
//   w(m) = sin(pi(m+eps)) / (N sin(pi(m+eps)/N)) * e^{j pi (N-1)(m+eps)/N}
cplx leakage(int n_fft, double epsilon, double m);

// Table of w(m) for m in [-(N-1), N-1].
struct IciCoefficients {
    int n_fft = 0;
    double epsilon = 0.0;
    std::vector<cplx> w;

    cplx at(long m) const { return w[static_cast<std::size_t>(m + n_fft - 1)]; }
};

IciCoefficients ici_coefficients(int n_fft, double epsilon);

enum class Scheme { standard, scm, pascs };

const char* scheme_name(Scheme s);

struct CancellationScheme {
    Scheme kind = Scheme::standard;
    int n_pilot = 0;  // pilots used by the scheme; pascs requires >= 2

    bool mirrored() const { return kind != Scheme::standard; }
    static CancellationScheme standard() { return {Scheme::standard, 0}; }
    static CancellationScheme scm() { return {Scheme::scm, 0}; }
    static CancellationScheme pascs(int n_pilot) { return {Scheme::pascs, n_pilot}; }
};

// Canonical unit-modulus QPSK pilot values (fixed PRBS), identical in every
// OFDM symbol so that consecutive symbols repeat them.
std::vector<cplx> pilot_sequence(std::size_t n);

// Writes -value onto the mirror bin of every data/pilot carrier. Rejects a
// frame whose mirror bins are already occupied.
void modulate_cancelling(SubcarrierFrame& frame, const AllocationPlan& plan,
                         const CancellationScheme& scheme);

// Mirror-pair differencing (Y(k) - Y(mirror))/2 for every carried symbol;
// identity pass-through for the standard scheme. Output order follows
// plan.data_indices then plan.pilot_indices.
std::vector<cplx> demodulate_cancelling(std::span<const cplx> bins, const AllocationPlan& plan,
                                        const CancellationScheme& scheme);
cplx decision_at(std::span<const cplx> bins, const AllocationPlan& plan,
                 const CancellationScheme& scheme, int carrier);

SubcarrierFrame insert_pilots(std::span<const cplx> data_syms, std::span<const cplx> pilot_syms,
                              const AllocationPlan& plan);

struct CirBreakdown {
    double signal_power = 0.0;
    double ici_data_power = 0.0;   // term A: random-data interference
    double ici_pilot_power = 0.0;  // term B: deterministic pilot interference
    double cir_db = 0.0;
};

// Exact expectation of desired vs interference power over the allocation,
// for unit-power independent data symbols and the canonical pilots.
CirBreakdown theoretical_cir(int n_fft, double epsilon, const CancellationScheme& scheme,
                             const AllocationPlan& plan);

// |w|, |w'|, |w''| per interfering carrier for one decision bin: raw leakage,
// leakage after transmit-side mirroring, and after receive-side differencing.
struct CoefficientSets {
    std::vector<int> carrier;
    std::vector<double> raw;
    std::vector<double> once;
    std::vector<double> twice;
};

CoefficientSets combined_coefficient_sets(int n_fft, double epsilon, int decision_bin,
                                          const AllocationPlan& plan);

} // namespace linksim::ici
