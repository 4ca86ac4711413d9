#include "linksim/kernels/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace linksim::kern {
namespace {

// Two complex doubles per register, packed [re0, im0, re1, im1].

inline __m256d cmul256(__m256d a, __m256d b) {
    const __m256d ar = _mm256_movedup_pd(a);       // [ar0 ar0 ar1 ar1]
    const __m256d ai = _mm256_permute_pd(a, 0xF);  // [ai0 ai0 ai1 ai1]
    const __m256d bs = _mm256_permute_pd(b, 0x5);  // [bi0 br0 bi1 br1]
    return _mm256_fmaddsub_pd(ar, b, _mm256_mul_pd(ai, bs));
}

inline __m256d conj256(__m256d a) {
    const __m256d mask = _mm256_setr_pd(0.0, -0.0, 0.0, -0.0);
    return _mm256_xor_pd(a, mask);
}

inline __m256d broadcast_c(cplx c) {
    return _mm256_setr_pd(c.real(), c.imag(), c.real(), c.imag());
}

inline const double* dp(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* dp(cplx* p) { return reinterpret_cast<double*>(p); }

inline cplx cmul1(cplx a, cplx b) {
    return {a.real() * b.real() - a.imag() * b.imag(),
            a.real() * b.imag() + a.imag() * b.real()};
}

void cmul_avx2(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(dp(a + i));
        const __m256d vb = _mm256_loadu_pd(dp(b + i));
        _mm256_storeu_pd(dp(out + i), cmul256(va, vb));
    }
    for (; i < n; ++i) out[i] = cmul1(a[i], b[i]);
}

void cmul_scaled_avx2(const cplx* a, const cplx* b, cplx scale, cplx* out, std::size_t n) {
    const __m256d vs = broadcast_c(scale);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(dp(a + i));
        const __m256d vb = _mm256_loadu_pd(dp(b + i));
        _mm256_storeu_pd(dp(out + i), cmul256(vs, cmul256(va, vb)));
    }
    for (; i < n; ++i) out[i] = cmul1(scale, cmul1(a[i], b[i]));
}

void caxpy_avx2(cplx g, const cplx* x, cplx* y, std::size_t n) {
    const __m256d vg = broadcast_c(g);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d vx = _mm256_loadu_pd(dp(x + i));
        const __m256d vy = _mm256_loadu_pd(dp(y + i));
        _mm256_storeu_pd(dp(y + i), _mm256_add_pd(vy, cmul256(vg, vx)));
    }
    for (; i < n; ++i) y[i] += cmul1(g, x[i]);
}

double energy_avx2(const cplx* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d v = _mm256_loadu_pd(dp(x + i));
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double sum = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < n; ++i) sum += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return sum;
}

void fft_stage_avx2(cplx* data, const cplx* tw, std::size_t n, std::size_t len,
                    std::size_t tw_stride) {
    const std::size_t half = len / 2;
    if (half < 2) {  // len == 2: twiddle is 1, plain add/sub pairs
        for (std::size_t base = 0; base < n; base += 2) {
            const cplx u = data[base];
            const cplx t = data[base + 1];
            data[base] = u + t;
            data[base + 1] = u - t;
        }
        return;
    }
    for (std::size_t base = 0; base < n; base += len) {
        std::size_t j = 0;
        for (; j + 2 <= half; j += 2) {
            const __m256d w = _mm256_loadu2_m128d(dp(tw + (j + 1) * tw_stride),
                                                  dp(tw + j * tw_stride));
            const __m256d lo = _mm256_loadu_pd(dp(data + base + j));
            const __m256d hi = _mm256_loadu_pd(dp(data + base + j + half));
            const __m256d t = cmul256(w, hi);
            _mm256_storeu_pd(dp(data + base + j), _mm256_add_pd(lo, t));
            _mm256_storeu_pd(dp(data + base + j + half), _mm256_sub_pd(lo, t));
        }
        for (; j < half; ++j) {
            const cplx t = cmul1(tw[j * tw_stride], data[base + j + half]);
            const cplx u = data[base + j];
            data[base + j] = u + t;
            data[base + j + half] = u - t;
        }
    }
}

std::uint64_t bit_errors_avx2(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
    std::uint64_t acc = 0;
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        const __m256i eq = _mm256_cmpeq_epi8(va, vb);
        const unsigned mask = static_cast<unsigned>(_mm256_movemask_epi8(eq));
        acc += static_cast<std::uint64_t>(_mm_popcnt_u32(~mask));
    }
    for (; i < n; ++i) acc += static_cast<std::uint64_t>(a[i] != b[i]);
    return acc;
}

void stbc_combine_avx2(const cplx* r1, const cplx* r2, const cplx* h1, const cplx* h2,
                       cplx* s1, cplx* s2, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d vr1 = _mm256_loadu_pd(dp(r1 + i));
        const __m256d vr2c = conj256(_mm256_loadu_pd(dp(r2 + i)));
        const __m256d vh1 = _mm256_loadu_pd(dp(h1 + i));
        const __m256d vh2 = _mm256_loadu_pd(dp(h2 + i));
        const __m256d t1 = _mm256_add_pd(cmul256(conj256(vh1), vr1), cmul256(vh2, vr2c));
        const __m256d t2 = _mm256_sub_pd(cmul256(conj256(vh2), vr1), cmul256(vh1, vr2c));
        _mm256_storeu_pd(dp(s1 + i), t1);
        _mm256_storeu_pd(dp(s2 + i), t2);
    }
    for (; i < n; ++i) {
        const cplx c2 = std::conj(r2[i]);
        s1[i] = cmul1(std::conj(h1[i]), r1[i]) + cmul1(h2[i], c2);
        s2[i] = cmul1(std::conj(h2[i]), r1[i]) - cmul1(h1[i], c2);
    }
}

} // namespace

const Ops* ops_avx2() {
    static const Ops ops = {
        "avx2",
        cmul_avx2,
        cmul_scaled_avx2,
        caxpy_avx2,
        energy_avx2,
        fft_stage_avx2,
        bit_errors_avx2,
        stbc_combine_avx2,
    };
    return cpu_has_avx2() ? &ops : nullptr;
}

} // namespace linksim::kern

#endif // x86-64
