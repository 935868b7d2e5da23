// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "csmacap/geometry.hpp"

namespace csmacap {

/// Nodes in the square [0, side_length)^2.
struct NodeSet {
    std::vector<Point> nodes;
    double side_length = 0.0;
    std::uint64_t seed = 0;
};

enum class NodeCount : std::uint8_t {
    Poisson,  ///< count drawn from Poisson(n), the default
    Exact,    ///< exactly n nodes
};

/// Places nodes uniformly in a square of area n (unit density).
/// Throws std::invalid_argument when n < 1.
NodeSet generate_network(std::int64_t n, std::uint64_t seed, NodeCount count = NodeCount::Poisson);

enum class TrafficModel : std::uint8_t {
    UniformSink,  ///< every node picks a uniformly random other node
    Permutation,  ///< sinks form a derangement, so each node is a sink once
};

struct SourceSinkPairs {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    std::vector<double> rates;  ///< common demand per pair, all equal
};

/// One flow per node. Throws std::invalid_argument for fewer than 2 nodes.
SourceSinkPairs sample_pairs(const NodeSet& nodes, std::uint64_t seed,
                             TrafficModel model = TrafficModel::UniformSink);

}  // namespace csmacap
