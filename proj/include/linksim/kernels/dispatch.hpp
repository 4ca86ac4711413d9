#pragma once

namespace linksim::kern {

enum class Isa { scalar, avx2 };

// ISA selected at first use: LINKSIM_SIMD=scalar|avx2|auto overrides the
// cpuid-based default. avx2 requested without CPU support falls back to scalar.
Isa active_isa();
const char* isa_name(Isa isa);
bool cpu_has_avx2();

} // namespace linksim::kern
