// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#include "csmacap/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace csmacap {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    return splitmix64(splitmix64(seed) ^ splitmix64(tag + 0x632BE59BD9B4E019ULL));
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("Rng::below: bound must be positive");
    }
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v = engine_();
    while (v >= limit) {
        v = engine_();
    }
    return v % bound;
}

double Rng::exponential(double rate) {
    // 1 - u lies in (0, 1], so the log is finite.
    return -std::log1p(-uniform()) / rate;
}

std::uint64_t Rng::poisson(double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) {
        throw std::invalid_argument("Rng::poisson: mean must be finite and non-negative");
    }
    // Sequential inversion on chunks small enough that exp(-chunk) stays
    // well above underflow. The sum of independent Poisson draws is Poisson.
    constexpr double kChunk = 30.0;
    std::uint64_t total = 0;
    double remaining = mean;
    while (remaining > 0.0) {
        const double lam = std::min(remaining, kChunk);
        remaining -= lam;
        double p = std::exp(-lam);
        double cdf = p;
        const double u = uniform();
        std::uint64_t k = 0;
        while (u >= cdf) {
            ++k;
            p *= lam / static_cast<double>(k);
            cdf += p;
            if (p < 1e-300 && cdf >= 1.0 - 1e-15) {
                break;
            }
        }
        total += k;
    }
    return total;
}

}  // namespace csmacap
