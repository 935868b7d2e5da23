// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace csmacap::kernels {

/// Result of a nearest-point scan. index is SIZE_MAX for an empty input.
struct Nearest {
    std::size_t index = SIZE_MAX;
    double sq_dist = 0.0;
};

/// Batched point-to-array geometry over structure-of-arrays coordinates.
/// Every implementation computes dx*dx + dy*dy in the same order without
/// fused multiply-add, so all variants agree bit for bit.
struct KernelTable {
    std::string_view name;

    /// out[i] = |(xs[i], ys[i]) - (px, py)|^2
    void (*sq_dist)(double px, double py, const double* xs, const double* ys, std::size_t n, double* out);

    /// mask[i] = 1 when the squared distance is <= r2, else 0. Returns the count.
    std::size_t (*within)(double px, double py, const double* xs, const double* ys, std::size_t n, double r2,
                          std::uint8_t* mask);

    /// Smallest squared distance; ties go to the lowest index.
    Nearest (*nearest)(double px, double py, const double* xs, const double* ys, std::size_t n);
};

const KernelTable& scalar();

/// Vector table for the host, or nullptr when the CPU or build lacks one.
const KernelTable* vector();

/// Vector table when available, unless CSMACAP_FORCE_SCALAR is set.
const KernelTable& active();

}  // namespace csmacap::kernels
