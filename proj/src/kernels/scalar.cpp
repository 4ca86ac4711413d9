#include "linksim/kernels/kernels.hpp"

namespace linksim::kern {
namespace {

// Complex multiplies are spelled out so the scalar reference performs the
// same four multiplies and two adds as the vector lanes.
inline cplx cmul1(cplx a, cplx b) {
    return {a.real() * b.real() - a.imag() * b.imag(),
            a.real() * b.imag() + a.imag() * b.real()};
}

void cmul_scalar(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = cmul1(a[i], b[i]);
}

void cmul_scaled_scalar(const cplx* a, const cplx* b, cplx scale, cplx* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = cmul1(scale, cmul1(a[i], b[i]));
}

void caxpy_scalar(cplx g, const cplx* x, cplx* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += cmul1(g, x[i]);
}

double energy_scalar(const cplx* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return acc;
}

void fft_stage_scalar(cplx* data, const cplx* tw, std::size_t n, std::size_t len,
                      std::size_t tw_stride) {
    const std::size_t half = len / 2;
    for (std::size_t base = 0; base < n; base += len) {
        for (std::size_t j = 0; j < half; ++j) {
            const cplx t = cmul1(tw[j * tw_stride], data[base + j + half]);
            const cplx u = data[base + j];
            data[base + j] = u + t;
            data[base + j + half] = u - t;
        }
    }
}

std::uint64_t bit_errors_scalar(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < n; ++i) acc += static_cast<std::uint64_t>(a[i] != b[i]);
    return acc;
}

void stbc_combine_scalar(const cplx* r1, const cplx* r2, const cplx* h1, const cplx* h2,
                         cplx* s1, cplx* s2, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const cplx c2 = std::conj(r2[i]);
        s1[i] = cmul1(std::conj(h1[i]), r1[i]) + cmul1(h2[i], c2);
        s2[i] = cmul1(std::conj(h2[i]), r1[i]) - cmul1(h1[i], c2);
    }
}

} // namespace

const Ops& ops_scalar() {
    static const Ops ops = {
        "scalar",
        cmul_scalar,
        cmul_scaled_scalar,
        caxpy_scalar,
        energy_scalar,
        fft_stage_scalar,
        bit_errors_scalar,
        stbc_combine_scalar,
    };
    return ops;
}

} // namespace linksim::kern
