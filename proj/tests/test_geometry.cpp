// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#include <doctest.h>

#include <array>

#include "csmacap/geometry.hpp"
#include "csmacap/rng.hpp"

using namespace csmacap;

namespace {

Link link(double tx, double ty, double rx, double ry) { return Link{{tx, ty}, {rx, ry}}; }

// Reference: all four endpoint distances written out.
double gap_oracle(const Link& a, const Link& b) {
    const std::array<double, 4> d{distance(b.tx, a.rx), distance(b.rx, a.tx), distance(b.rx, a.rx),
                                  distance(b.tx, a.tx)};
    double m = d[0];
    for (double v : d) {
        m = v < m ? v : m;
    }
    return m;
}

}  // namespace

TEST_CASE("link_gap of a link with itself is zero") {
    const Link l = link(0.3, 0.4, 1.2, -0.7);
    CHECK(link_gap(l, l) == 0.0);
}

TEST_CASE("link_gap picks the receiver-receiver distance for facing links") {
    CHECK(link_gap(link(0, 0, 1, 0), link(4, 0, 3, 0)) == doctest::Approx(2.0));
}

TEST_CASE("link_gap properties on random links") {
    Rng rng(11);
    for (int k = 0; k < 2000; ++k) {
        const Link a = link(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5));
        const Link b = link(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5));
        const double g = link_gap(a, b);
        CHECK(g == gap_oracle(a, b));
        CHECK(g == link_gap(b, a));
        CHECK(g <= distance(b.tx, a.rx));
        const double sx = rng.uniform(-100, 100);
        const double sy = rng.uniform(-100, 100);
        const Link a2 = link(a.tx.x + sx, a.tx.y + sy, a.rx.x + sx, a.rx.y + sy);
        const Link b2 = link(b.tx.x + sx, b.tx.y + sy, b.rx.x + sx, b.rx.y + sy);
        CHECK(link_gap(a2, b2) == doctest::Approx(g).epsilon(1e-9));
    }
}

TEST_CASE("tolerant comparisons accept exact boundaries") {
    CHECK(at_least(1.0, 1.0));
    CHECK(at_least(1.0 - 1e-12, 1.0));
    CHECK_FALSE(at_least(1.0 - 1e-6, 1.0));
    CHECK(at_most(2.0 + 1e-12, 2.0));
    CHECK_FALSE(at_least(std::nan(""), 0.0));
}

TEST_CASE("max_link_length") {
    const std::array<Link, 2> ls{link(0, 0, 3, 4), link(0, 0, 1, 0)};
    CHECK(max_link_length(ls) == doctest::Approx(5.0));
    CHECK(max_link_length({}) == 0.0);
}

TEST_CASE("derive_seed separates streams") {
    CHECK(derive_seed(1, 2) != derive_seed(1, 3));
    CHECK(derive_seed(1, 2) != derive_seed(2, 2));
    CHECK(derive_seed(5, 9) == derive_seed(5, 9));
}

TEST_CASE("Rng samplers") {
    Rng rng(3);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));

    double esum = 0.0;
    for (int i = 0; i < n; ++i) {
        esum += rng.exponential(2.0);
    }
    CHECK(esum / n == doctest::Approx(0.5).epsilon(0.02));

    for (double mean : {3.0, 80.0, 5000.0}) {
        double psum = 0.0;
        const int m = 20000;
        for (int i = 0; i < m; ++i) {
            psum += static_cast<double>(rng.poisson(mean));
        }
        CHECK(psum / m == doctest::Approx(mean).epsilon(0.02));
    }
    CHECK_THROWS_AS(rng.below(0), std::invalid_argument);
    CHECK_THROWS_AS(rng.poisson(-1.0), std::invalid_argument);
}
