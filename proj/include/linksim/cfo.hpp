#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>

namespace linksim::cfo {

using cplx = std::complex<double>;

struct CfoEstimate {
    double epsilon_hat = 0.0;  // normalized to the subcarrier spacing
    int n_pilots_used = 0;
};

// ML estimate from the pilot bins of two consecutive OFDM symbols:
//   eps_hat = arg( sum conj(X_i,p) X_{i+1,p} ) / (2 pi) * n_fft / advance
// where advance = n_fft + cp_len samples between the two FFT windows. The
// trailing factor undoes the extra rotation the cyclic prefix accumulates.
// Returns nullopt when the cross-correlation sum vanishes (estimation
// failure, distinct from a valid 0.0).
std::optional<CfoEstimate> estimate_cfo(std::span<const cplx> pilots_sym_i,
                                        std::span<const cplx> pilots_sym_i1,
                                        int inter_symbol_samples, int n_fft);

// Same estimator fed with a pre-accumulated cross-correlation sum (lets a
// frame average over many symbol pairs before the single arg()).
std::optional<CfoEstimate> estimate_cfo_from_sum(cplx cross_sum, int n_pilots,
                                                 int inter_symbol_samples, int n_fft);

// Counter-rotation by -epsilon_hat; composing with an impairment of epsilon
// leaves a residual of exactly epsilon - epsilon_hat.
void correct_cfo(std::span<cplx> x, const CfoEstimate& estimate, int n_fft,
                 std::int64_t start_index = 0);

} // namespace linksim::cfo
