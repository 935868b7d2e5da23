// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#pragma once

#include <cstdint>
#include <random>

namespace csmacap {

/// Mixes a seed with a stream tag so independent consumers of one
/// experiment seed never share a random stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

/// mt19937_64 plus hand-written samplers. The standard distributions are
/// implementation-defined, so they are avoided to keep outputs identical
/// across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer on [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound);

    double exponential(double rate);

    std::uint64_t poisson(double mean);

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace csmacap
