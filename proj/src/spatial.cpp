// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#include "csmacap/spatial.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "csmacap/rng.hpp"

namespace csmacap {

namespace {
constexpr std::uint64_t kTagCount = 1;
constexpr std::uint64_t kTagPlace = 2;
constexpr std::uint64_t kTagTraffic = 3;
}  // namespace

NodeSet generate_network(std::int64_t n, std::uint64_t seed, NodeCount count) {
    if (n < 1) {
        throw std::invalid_argument("generate_network: n must be at least 1");
    }
    NodeSet out;
    out.seed = seed;
    out.side_length = std::sqrt(static_cast<double>(n));

    std::uint64_t total = static_cast<std::uint64_t>(n);
    if (count == NodeCount::Poisson) {
        Rng count_rng(derive_seed(seed, kTagCount));
        total = count_rng.poisson(static_cast<double>(n));
    }

    Rng place(derive_seed(seed, kTagPlace));
    out.nodes.reserve(total);
    for (std::uint64_t i = 0; i < total; ++i) {
        const double x = place.uniform() * out.side_length;
        const double y = place.uniform() * out.side_length;
        out.nodes.push_back({x, y});
    }
    return out;
}

SourceSinkPairs sample_pairs(const NodeSet& nodes, std::uint64_t seed, TrafficModel model) {
    const std::size_t m = nodes.nodes.size();
    if (m < 2) {
        throw std::invalid_argument("sample_pairs: need at least two nodes");
    }
    Rng rng(derive_seed(seed, kTagTraffic));
    SourceSinkPairs out;
    out.pairs.reserve(m);

    if (model == TrafficModel::UniformSink) {
        for (std::uint32_t s = 0; s < m; ++s) {
            auto d = static_cast<std::uint32_t>(rng.below(m - 1));
            if (d >= s) {
                ++d;
            }
            out.pairs.emplace_back(s, d);
        }
    } else {
        std::vector<std::uint32_t> perm(m);
        bool fixed_point = true;
        while (fixed_point) {
            std::iota(perm.begin(), perm.end(), 0U);
            for (std::size_t i = m - 1; i > 0; --i) {
                std::swap(perm[i], perm[rng.below(i + 1)]);
            }
            fixed_point = false;
            for (std::uint32_t i = 0; i < m; ++i) {
                if (perm[i] == i) {
                    fixed_point = true;
                    break;
                }
            }
        }
        for (std::uint32_t s = 0; s < m; ++s) {
            out.pairs.emplace_back(s, perm[s]);
        }
    }
    out.rates.assign(out.pairs.size(), 1.0);
    return out;
}

}  // namespace csmacap
