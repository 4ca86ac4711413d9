#include "linksim/cfo.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "linksim/ofdm.hpp"

namespace linksim::cfo {

std::optional<CfoEstimate> estimate_cfo_from_sum(cplx cross_sum, int n_pilots,
                                                 int inter_symbol_samples, int n_fft) {
    if (n_pilots < 1) throw std::invalid_argument("estimate_cfo: no pilots");
    if (inter_symbol_samples < n_fft)
        throw std::invalid_argument("estimate_cfo: symbol advance shorter than FFT window");
    if (cross_sum == cplx{}) return std::nullopt;
    CfoEstimate est;
    est.n_pilots_used = n_pilots;
    est.epsilon_hat = std::arg(cross_sum) / (2.0 * std::numbers::pi) *
                      static_cast<double>(n_fft) / static_cast<double>(inter_symbol_samples);
    return est;
}

std::optional<CfoEstimate> estimate_cfo(std::span<const cplx> pilots_sym_i,
                                        std::span<const cplx> pilots_sym_i1,
                                        int inter_symbol_samples, int n_fft) {
    if (pilots_sym_i.empty() || pilots_sym_i.size() != pilots_sym_i1.size())
        throw std::invalid_argument("estimate_cfo: pilot vectors empty or mismatched");
    cplx sum{};
    for (std::size_t p = 0; p < pilots_sym_i.size(); ++p)
        sum += std::conj(pilots_sym_i[p]) * pilots_sym_i1[p];
    return estimate_cfo_from_sum(sum, static_cast<int>(pilots_sym_i.size()),
                                 inter_symbol_samples, n_fft);
}

void correct_cfo(std::span<cplx> x, const CfoEstimate& estimate, int n_fft,
                 std::int64_t start_index) {
    ofdm::apply_cfo(x, -estimate.epsilon_hat, n_fft, start_index);
}

} // namespace linksim::cfo
