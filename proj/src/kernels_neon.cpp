// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#include <arm_neon.h>

#include "csmacap/kernels.hpp"

namespace csmacap::kernels {

namespace {

inline float64x2_t sq2(float64x2_t px, float64x2_t py, const double* xs, const double* ys) {
    const float64x2_t dx = vsubq_f64(vld1q_f64(xs), px);
    const float64x2_t dy = vsubq_f64(vld1q_f64(ys), py);
    return vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy));
}

void sq_dist_neon(double px, double py, const double* xs, const double* ys, std::size_t n, double* out) {
    const float64x2_t vx = vdupq_n_f64(px);
    const float64x2_t vy = vdupq_n_f64(py);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(out + i, sq2(vx, vy, xs + i, ys + i));
    }
    for (; i < n; ++i) {
        const double dx = xs[i] - px;
        const double dy = ys[i] - py;
        out[i] = dx * dx + dy * dy;
    }
}

std::size_t within_neon(double px, double py, const double* xs, const double* ys, std::size_t n, double r2,
                        std::uint8_t* mask) {
    const float64x2_t vx = vdupq_n_f64(px);
    const float64x2_t vy = vdupq_n_f64(py);
    const float64x2_t vr = vdupq_n_f64(r2);
    std::size_t count = 0;
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const uint64x2_t hit = vcleq_f64(sq2(vx, vy, xs + i, ys + i), vr);
        mask[i] = vgetq_lane_u64(hit, 0) ? 1 : 0;
        mask[i + 1] = vgetq_lane_u64(hit, 1) ? 1 : 0;
        count += mask[i] + mask[i + 1];
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

Nearest nearest_neon(double px, double py, const double* xs, const double* ys, std::size_t n) {
    // Distances are computed in vector lanes; the selection stays scalar so
    // the tie rule matches the reference exactly.
    Nearest best;
    const float64x2_t vx = vdupq_n_f64(px);
    const float64x2_t vy = vdupq_n_f64(py);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = sq2(vx, vy, xs + i, ys + i);
        for (int k = 0; k < 2; ++k) {
            const double d2 = k == 0 ? vgetq_lane_f64(d, 0) : vgetq_lane_f64(d, 1);
            if (best.index == SIZE_MAX || d2 < best.sq_dist) {
                best.index = i + static_cast<std::size_t>(k);
                best.sq_dist = d2;
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

constexpr KernelTable kNeon{"neon", sq_dist_neon, within_neon, nearest_neon};

}  // namespace

const KernelTable* neon_table() { return &kNeon; }

}  // namespace csmacap::kernels
