// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#pragma once

#include <cstddef>
#include <vector>

#include "csmacap/geometry.hpp"
#include "csmacap/rng.hpp"

namespace csmacap {

/// Small link sets for brute-force family checks.
struct LinkBoxParams {
    std::size_t count = 6;
    double side = 6.0;        ///< transmitters uniform in [0, side)^2
    double min_length = 0.2;  ///< link lengths uniform in [min_length, max_length]
    double max_length = 1.0;
};

std::vector<Link> random_links(Rng& rng, const LinkBoxParams& p);

/// Pairs of links on a common line with the receivers facing each other and
/// the transmitters `spacing` apart, padded with random links. This is the
/// geometry where transmitter-side sensing sees the most slack relative to
/// the receiver-side interference.
struct FacingPairParams {
    std::size_t pairs = 1;
    double spacing = 3.0;
    double length = 1.0;
    double jitter = 0.05;  ///< relative perturbation of lengths and spacing
    LinkBoxParams padding{0, 6.0, 0.2, 1.0};
};

std::vector<Link> facing_pairs(Rng& rng, const FacingPairParams& p);

}  // namespace csmacap
