// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#include "csmacap/geometry.hpp"

#include <algorithm>

namespace csmacap {

bool same_point(Point a, Point b) {
    const double scale = std::max({std::abs(a.x), std::abs(a.y), std::abs(b.x), std::abs(b.y), 1.0});
    return squared_distance(a, b) <= (kRelTol * scale) * (kRelTol * scale);
}

std::string_view link_class_label(LinkClass c) {
    switch (c) {
        case LinkClass::Backbone:
            return "backbone";
        case LinkClass::Peripheral:
            return "peripheral";
        case LinkClass::Unassigned:
            break;
    }
    return "unassigned";
}

double link_gap(const Link& a, const Link& b) {
    return std::min({distance(b.tx, a.rx), distance(b.rx, a.tx), distance(b.rx, a.rx), distance(b.tx, a.tx)});
}

double max_link_length(std::span<const Link> links) {
    double best = 0.0;
    for (const Link& l : links) {
        best = std::max(best, l.length());
    }
    return best;
}

}  // namespace csmacap
