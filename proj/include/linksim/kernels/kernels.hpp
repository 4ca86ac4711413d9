#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>

#include "linksim/kernels/dispatch.hpp"

namespace linksim::kern {

using cplx = std::complex<double>;

// Inner-loop kernels. Every operation has a scalar reference implementation
// and, on x86-64, an AVX2 variant; the dispatched entry points below pick one
// at runtime. Scalar and SIMD variants are equivalence-tested against each
// other (LSB-level differences allowed where FMA contraction applies).
struct Ops {
    const char* name;
    // out[i] = a[i] * b[i]
    void (*cmul)(const cplx* a, const cplx* b, cplx* out, std::size_t n);
    // out[i] = scale * a[i] * b[i]
    void (*cmul_scaled)(const cplx* a, const cplx* b, cplx scale, cplx* out, std::size_t n);
    // y[i] += g * x[i]
    void (*caxpy)(cplx g, const cplx* x, cplx* y, std::size_t n);
    // sum |x[i]|^2
    double (*energy)(const cplx* x, std::size_t n);
    // one radix-2 DIT butterfly stage over n points with block length len;
    // twiddle index for offset j within a block is j*tw_stride
    void (*fft_stage)(cplx* data, const cplx* tw, std::size_t n, std::size_t len,
                      std::size_t tw_stride);
    // count positions where the 0/1 bytes differ
    std::uint64_t (*bit_errors)(const std::uint8_t* a, const std::uint8_t* b, std::size_t n);
    // per-bin Alamouti combining:
    //   s1[i] = conj(h1[i])*r1[i] + h2[i]*conj(r2[i])
    //   s2[i] = conj(h2[i])*r1[i] - h1[i]*conj(r2[i])
    void (*stbc_combine)(const cplx* r1, const cplx* r2, const cplx* h1, const cplx* h2,
                         cplx* s1, cplx* s2, std::size_t n);
};

const Ops& ops_scalar();
const Ops* ops_avx2();  // nullptr when unavailable (not compiled in or no CPU support)
const Ops& ops_active();

// dispatched convenience wrappers
inline void cmul(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
    ops_active().cmul(a, b, out, n);
}
inline void cmul_scaled(const cplx* a, const cplx* b, cplx scale, cplx* out, std::size_t n) {
    ops_active().cmul_scaled(a, b, scale, out, n);
}
inline void caxpy(cplx g, const cplx* x, cplx* y, std::size_t n) {
    ops_active().caxpy(g, x, y, n);
}
inline double energy(const cplx* x, std::size_t n) { return ops_active().energy(x, n); }
inline void fft_stage(cplx* data, const cplx* tw, std::size_t n, std::size_t len,
                      std::size_t tw_stride) {
    ops_active().fft_stage(data, tw, n, len, tw_stride);
}
inline std::uint64_t bit_errors(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
    return ops_active().bit_errors(a, b, n);
}
inline void stbc_combine(const cplx* r1, const cplx* r2, const cplx* h1, const cplx* h2,
                         cplx* s1, cplx* s2, std::size_t n) {
    ops_active().stbc_combine(r1, r2, h1, h2, s1, s2, n);
}

} // namespace linksim::kern
