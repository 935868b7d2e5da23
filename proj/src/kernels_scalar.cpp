// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#include "csmacap/kernels.hpp"

namespace csmacap::kernels {

namespace {

void sq_dist_scalar(double px, double py, const double* xs, const double* ys, std::size_t n, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - px;
        const double dy = ys[i] - py;
        out[i] = dx * dx + dy * dy;
    }
}

std::size_t within_scalar(double px, double py, const double* xs, const double* ys, std::size_t n, double r2,
                          std::uint8_t* mask) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - px;
        const double dy = ys[i] - py;
        const bool hit = dx * dx + dy * dy <= r2;
        mask[i] = hit ? 1 : 0;
        count += hit ? 1 : 0;
    }
    return count;
}

Nearest nearest_scalar(double px, double py, const double* xs, const double* ys, std::size_t n) {
    Nearest best;
    for (std::size_t i = 0; i < n; ++i) {
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

constexpr KernelTable kScalar{"scalar", sq_dist_scalar, within_scalar, nearest_scalar};

}  // namespace

const KernelTable& scalar() { return kScalar; }

}  // namespace csmacap::kernels
