// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#include "csmacap/instances.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace csmacap {

namespace {

Point polar(Point o, double r, double theta) { return {o.x + r * std::cos(theta), o.y + r * std::sin(theta)}; }

}  // namespace

std::vector<Link> random_links(Rng& rng, const LinkBoxParams& p) {
    if (!(p.side > 0.0) || !(p.min_length > 0.0) || !(p.max_length >= p.min_length)) {
        throw std::invalid_argument("random_links: need side > 0 and 0 < min_length <= max_length");
    }
    std::vector<Link> out;
    out.reserve(p.count);
    for (std::size_t i = 0; i < p.count; ++i) {
        const Point t{rng.uniform(0.0, p.side), rng.uniform(0.0, p.side)};
        const double len = rng.uniform(p.min_length, p.max_length);
        const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
        out.push_back({t, polar(t, len, theta), LinkClass::Unassigned});
    }
    return out;
}

std::vector<Link> facing_pairs(Rng& rng, const FacingPairParams& p) {
    std::vector<Link> out;
    const double side = p.padding.side;
    for (std::size_t k = 0; k < p.pairs; ++k) {
        const Point t1{rng.uniform(0.0, side), rng.uniform(0.0, side)};
        const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double l1 = p.length * (1.0 - p.jitter * rng.uniform());
        const double l2 = p.length * (1.0 - p.jitter * rng.uniform());
        const double gap = p.spacing * (1.0 + p.jitter * rng.uniform());
        const Point t2 = polar(t1, gap, theta);
        out.push_back({t1, polar(t1, l1, theta), LinkClass::Unassigned});
        out.push_back({t2, polar(t2, l2, theta + std::numbers::pi), LinkClass::Unassigned});
    }
    if (p.padding.count > 0) {
        for (Link& l : random_links(rng, p.padding)) {
            out.push_back(l);
        }
    }
    return out;
}

}  // namespace csmacap
