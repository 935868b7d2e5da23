// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#include <cstdlib>

#include "csmacap/kernels.hpp"

namespace csmacap::kernels {

#if defined(CSMACAP_HAVE_AVX2)
const KernelTable* avx2_table();
#endif
#if defined(CSMACAP_HAVE_NEON)
const KernelTable* neon_table();
#endif

const KernelTable* vector() {
#if defined(CSMACAP_HAVE_AVX2)
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported ? avx2_table() : nullptr;
#elif defined(CSMACAP_HAVE_NEON)
    return neon_table();
#else
    return nullptr;
#endif
}

const KernelTable& active() {
    static const KernelTable* chosen = [] {
        const char* force = std::getenv("CSMACAP_FORCE_SCALAR");
        const bool forced = force != nullptr && force[0] != '\0' && force[0] != '0';
        const KernelTable* v = vector();
        return (forced || v == nullptr) ? &scalar() : v;
    }();
    return *chosen;
}

}  // namespace csmacap::kernels
