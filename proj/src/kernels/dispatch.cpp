#include "linksim/kernels/dispatch.hpp"
#include "linksim/kernels/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace linksim::kern {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

static Isa resolve_isa() {
    const char* env = std::getenv("LINKSIM_SIMD");
    if (env != nullptr) {
        if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
        if (std::strcmp(env, "avx2") == 0)
            return (ops_avx2() != nullptr) ? Isa::avx2 : Isa::scalar;
        // anything else, including "auto", falls through
    }
    return (ops_avx2() != nullptr) ? Isa::avx2 : Isa::scalar;
}

Isa active_isa() {
    static const Isa isa = resolve_isa();
    return isa;
}

const char* isa_name(Isa isa) {
    switch (isa) {
        case Isa::avx2: return "avx2";
        default: return "scalar";
    }
}

const Ops& ops_active() {
    return active_isa() == Isa::avx2 ? *ops_avx2() : ops_scalar();
}

#if !defined(LINKSIM_HAVE_AVX2_TU)
const Ops* ops_avx2() { return nullptr; }
#endif

} // namespace linksim::kern
