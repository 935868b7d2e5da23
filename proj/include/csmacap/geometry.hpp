// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string_view>

namespace csmacap {

/// Relative tolerance used by every threshold comparison in the library.
/// A quantity sitting exactly on a boundary counts as satisfying it.
inline constexpr double kRelTol = 1e-9;

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(Point a, Point b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

inline double squared_distance(Point a, Point b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

/// `lhs >= rhs` up to kRelTol relative slack.
inline bool at_least(double lhs, double rhs) {
    if (lhs >= rhs) {
        return true;
    }
    if (!std::isfinite(lhs) || !std::isfinite(rhs)) {
        return false;
    }
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    return rhs - lhs <= kRelTol * scale;
}

/// `lhs <= rhs` up to kRelTol relative slack.
inline bool at_most(double lhs, double rhs) { return at_least(rhs, lhs); }

/// Two nodes are the same node when their coordinates coincide.
bool same_point(Point a, Point b);

enum class LinkClass : std::uint8_t { Unassigned, Backbone, Peripheral };

std::string_view link_class_label(LinkClass c);

struct Link {
    Point tx;
    Point rx;
    LinkClass cls = LinkClass::Unassigned;

    double length() const { return distance(tx, rx); }
};

/// Minimum over the four endpoint pairs of two links.
double link_gap(const Link& a, const Link& b);

/// Largest transmitter-receiver distance in a link set (0 for an empty set).
double max_link_length(std::span<const Link> links);

}  // namespace csmacap
