// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

// Compiled with -mavx2; only reached after a runtime CPU check.

#include <immintrin.h>

#include "csmacap/kernels.hpp"

namespace csmacap::kernels {

namespace {

inline __m256d sq4(__m256d px, __m256d py, const double* xs, const double* ys) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs), px);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys), py);
    return _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
}

void sq_dist_avx2(double px, double py, const double* xs, const double* ys, std::size_t n, double* out) {
    const __m256d vx = _mm256_set1_pd(px);
    const __m256d vy = _mm256_set1_pd(py);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, sq4(vx, vy, xs + i, ys + i));
    }
    for (; i < n; ++i) {
        const double dx = xs[i] - px;
        const double dy = ys[i] - py;
        out[i] = dx * dx + dy * dy;
    }
}

std::size_t within_avx2(double px, double py, const double* xs, const double* ys, std::size_t n, double r2,
                        std::uint8_t* mask) {
    const __m256d vx = _mm256_set1_pd(px);
    const __m256d vy = _mm256_set1_pd(py);
    const __m256d vr = _mm256_set1_pd(r2);
    std::size_t count = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d hit = _mm256_cmp_pd(sq4(vx, vy, xs + i, ys + i), vr, _CMP_LE_OQ);
        const int bits = _mm256_movemask_pd(hit);
        mask[i] = static_cast<std::uint8_t>(bits & 1);
        mask[i + 1] = static_cast<std::uint8_t>((bits >> 1) & 1);
        mask[i + 2] = static_cast<std::uint8_t>((bits >> 2) & 1);
        mask[i + 3] = static_cast<std::uint8_t>((bits >> 3) & 1);
        count += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(bits)));
    }
    for (; i < n; ++i) {
        const double dx = xs[i] - px;
        const double dy = ys[i] - py;
        const bool hit = dx * dx + dy * dy <= r2;
        mask[i] = hit ? 1 : 0;
        count += hit ? 1 : 0;
    }
    return count;
}

Nearest nearest_avx2(double px, double py, const double* xs, const double* ys, std::size_t n) {
    Nearest best;
    std::size_t i = 0;
    if (n >= 4) {
        const __m256d vx = _mm256_set1_pd(px);
        const __m256d vy = _mm256_set1_pd(py);
        __m256d best_d = sq4(vx, vy, xs, ys);
        __m256d best_i = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
        __m256d idx = best_i;
        const __m256d step = _mm256_set1_pd(4.0);
        for (i = 4; i + 4 <= n; i += 4) {
            idx = _mm256_add_pd(idx, step);
            const __m256d d = sq4(vx, vy, xs + i, ys + i);
            const __m256d lt = _mm256_cmp_pd(d, best_d, _CMP_LT_OQ);
            best_d = _mm256_blendv_pd(best_d, d, lt);
            best_i = _mm256_blendv_pd(best_i, idx, lt);
        }
        alignas(32) double lane_d[4];
        alignas(32) double lane_i[4];
        _mm256_store_pd(lane_d, best_d);
        _mm256_store_pd(lane_i, best_i);
        for (int k = 0; k < 4; ++k) {
            const auto li = static_cast<std::size_t>(lane_i[k]);
            if (best.index == SIZE_MAX || lane_d[k] < best.sq_dist ||
                (lane_d[k] == best.sq_dist && li < best.index)) {
                best.index = li;
                best.sq_dist = lane_d[k];
            }
        }
    }
    for (; i < n; ++i) {
        const double dx = xs[i] - px;
        const double dy = ys[i] - py;
        const double d2 = dx * dx + dy * dy;
        if (best.index == SIZE_MAX || d2 < best.sq_dist) {
            best.index = i;
            best.sq_dist = d2;
        }
    }
    return best;
}

constexpr KernelTable kAvx2{"avx2", sq_dist_avx2, within_avx2, nearest_avx2};

}  // namespace

const KernelTable* avx2_table() { return &kAvx2; }

}  // namespace csmacap::kernels
