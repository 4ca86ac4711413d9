#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace linksim::ofdm {

using cplx = std::complex<double>;

// Iterative radix-2 plan; immutable after construction and shareable
// across workers.
class FftPlan {
  public:
    explicit FftPlan(std::size_t n);
    std::size_t size() const { return n_; }
    const std::vector<cplx>& twiddle() const { return twiddle_; }
    const std::vector<std::uint32_t>& bitrev() const { return bitrev_; }

  private:
    std::size_t n_;
    std::vector<cplx> twiddle_;        // e^{-2pi i k/n}, k < n/2
    std::vector<std::uint32_t> bitrev_;
};

// Forward transform is unscaled; the inverse carries the 1/N factor.
void fft_inplace(std::span<cplx> x, const FftPlan& plan);
void ifft_inplace(std::span<cplx> x, const FftPlan& plan);
std::vector<cplx> fft(std::vector<cplx> x);
std::vector<cplx> ifft(std::vector<cplx> x);

enum class Role : std::uint8_t { null_carrier, data, pilot, mirror };

// Subcarrier layout for the 512-bin symbol: 252 primary carriers
// (192 data + 60 pilots) at bins 2..253, each paired with the mirror bin
// N-1-k that holds its negated cancellation copy; DC/edge guard bins stay
// null. Standard (non-cancelling) operation leaves the mirror bins empty.
struct AllocationPlan {
    int n_fft = 512;
    std::vector<int> data_indices;
    std::vector<int> pilot_indices;
    std::vector<Role> roles;

    int mirror_of(int k) const { return n_fft - 1 - k; }
    int n_data() const { return static_cast<int>(data_indices.size()); }
    int n_pilot() const { return static_cast<int>(pilot_indices.size()); }

    static const AllocationPlan& wimax512();
};

struct SubcarrierFrame {
    int n_fft = 0;
    std::vector<cplx> values;
};

SubcarrierFrame assemble_symbol(std::span<const cplx> data, std::span<const cplx> pilots,
                                const AllocationPlan& plan);

struct IqBuffer {
    std::vector<cplx> samples;
    double sample_rate = 4.0e6;
    int cp_len = 0;
};

IqBuffer add_cp(const IqBuffer& symbol, int cp_len);
IqBuffer strip_cp(const IqBuffer& buf);

// Multiplies sample n by e^{j 2 pi eps (start_index + n) / n_fft}; the start
// index keeps the rotation phase continuous across symbols of a frame.
void apply_cfo(std::span<cplx> x, double epsilon, int n_fft, std::int64_t start_index = 0);

struct PilotPlan {
    int npt = 1;
    int npf = 1;
    double delta_f = 0.0;
    double t_s = 0.0;
    double tau_max = 0.0;
};

PilotPlan compute_pilot_spacing(double delta_f, double t_s, double tau_max);

} // namespace linksim::ofdm
