// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#include <doctest.h>

#include <cmath>
#include <map>

#include "csmacap/csma.hpp"
#include "csmacap/instances.hpp"

using namespace csmacap;

namespace {

Family conflicting_pair() { return Family(2, {0b00, 0b01, 0b10}); }
Family independent_pair() { return Family(2, {0b00, 0b01, 0b10, 0b11}); }

// Product form evaluated directly over every subset of the family.
std::map<LinkMask, double> product_form(const Family& f, const std::vector<double>& nu) {
    std::map<LinkMask, double> p;
    double z = 0.0;
    for (LinkMask s : f.masks()) {
        double w = 1.0;
        for (std::size_t i = 0; i < nu.size(); ++i) {
            if (s >> i & 1U) w *= nu[i];
        }
        p[s] = w;
        z += w;
    }
    for (auto& [s, w] : p) w /= z;
    return p;
}

}  // namespace

TEST_CASE("stationary distribution small cases") {
    const StationaryDistribution a = stationary(conflicting_pair(), {{1.0, 1.0}});
    CHECK(a.probability_of(0) == doctest::Approx(1.0 / 3.0));
    CHECK(a.probability_of(1) == doctest::Approx(1.0 / 3.0));
    CHECK(a.probability_of(3) == 0.0);
    CHECK(a.throughput[0] == doctest::Approx(1.0 / 3.0));
    CHECK(a.throughput[1] == doctest::Approx(1.0 / 3.0));

    const StationaryDistribution b = stationary(independent_pair(), {{1.0, 1.0}});
    for (LinkMask s = 0; s < 4; ++s) {
        CHECK(b.probability_of(s) == doctest::Approx(0.25));
    }
    CHECK(b.throughput[0] == doctest::Approx(0.5));

    const StationaryDistribution tiny = stationary(independent_pair(), {{1e-9, 1e-9}});
    CHECK(tiny.probability_of(0) == doctest::Approx(1.0));
}

TEST_CASE("stationary input validation") {
    CHECK_THROWS_AS(stationary(conflicting_pair(), {{1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(stationary(conflicting_pair(), {{1.0, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(stationary(Family(2, {0b00, 0b11}), {{1.0, 1.0}}), std::invalid_argument);
}

TEST_CASE("stationary equals the product form on random families") {
    Rng rng(12);
    for (int k = 0; k < 50; ++k) {
        const auto ls = random_links(rng, {7, 5.0, 0.2, 1.0});
        const Family f = enumerate_family(ls, {Model::B1, {}}, RadioConfig{});
        std::vector<double> nu(7);
        for (double& v : nu) v = rng.uniform(0.2, 5.0);
        const StationaryDistribution d = stationary(f, {nu});
        const auto ref = product_form(f, nu);
        double total = 0.0;
        for (std::size_t s = 0; s < d.states.size(); ++s) {
            CHECK(d.probability[s] == doctest::Approx(ref.at(d.states[s])).epsilon(1e-12));
            total += d.probability[s];
        }
        CHECK(total == doctest::Approx(1.0));
        for (std::size_t i = 0; i < nu.size(); ++i) {
            double marginal = 0.0;
            for (const auto& [s, p] : ref) {
                if (s >> i & 1U) marginal += p;
            }
            CHECK(d.throughput[i] == doctest::Approx(marginal).epsilon(1e-12));
        }
    }
}

TEST_CASE("tdma throughput") {
    CHECK(tdma_throughput({2, {FeasibleState({0}), FeasibleState({1})}}) == std::vector<double>{0.5, 0.5});
    CHECK(tdma_throughput({2, {FeasibleState({0, 1}), FeasibleState({0})}}) == std::vector<double>{1.0, 0.5});
    CHECK_THROWS_AS(tdma_throughput({2, {}}), std::invalid_argument);
    CHECK_THROWS_AS(tdma_throughput({1, {FeasibleState({3})}}), std::out_of_range);
}

TEST_CASE("total variation") {
    const std::map<LinkMask, double> p{{0, 0.5}, {1, 0.5}};
    const std::map<LinkMask, double> q{{0, 0.5}, {2, 0.5}};
    CHECK(total_variation(p, p) == 0.0);
    CHECK(total_variation(p, q) == doctest::Approx(0.5));
}

TEST_CASE("CTMC simulation matches the stationary law") {
    SimOptions o;
    o.events = 1'000'000;
    o.seed = 5;
    const SimTrace t = simulate_ctmc(conflicting_pair(), {{1.0, 1.0}}, o);
    const auto air = t.airtime();
    CHECK(air[0] == doctest::Approx(1.0 / 3.0).epsilon(0.03));
    CHECK(air[1] == doctest::Approx(1.0 / 3.0).epsilon(0.03));
    CHECK(t.event_count == o.events);

    const SimTrace one = simulate_ctmc(Family(1, {0, 1}), {{1.0}}, o);
    CHECK(std::abs(one.airtime()[0] - 0.5) < 0.01);
}

TEST_CASE("CTMC simulation is deterministic per seed") {
    SimOptions o;
    o.events = 2000;
    o.seed = 77;
    o.record_events = true;
    const SimTrace a = simulate_ctmc(independent_pair(), {{0.7, 2.0}}, o);
    const SimTrace b = simulate_ctmc(independent_pair(), {{0.7, 2.0}}, o);
    REQUIRE(a.events.size() == b.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        CHECK(a.events[i].t == b.events[i].t);
        CHECK(a.events[i].link == b.events[i].link);
        CHECK(a.events[i].kind == b.events[i].kind);
    }
    CHECK(a.state_time == b.state_time);
}

TEST_CASE("graph and family simulations agree on the same seed") {
    Rng rng(4);
    const auto ls = random_links(rng, {5, 4.0, 0.2, 1.0});
    const FamilySpec spec{Model::B1, {}};
    SimOptions o;
    o.events = 20000;
    o.seed = 3;
    const BackoffRates r{{1.0, 2.0, 0.5, 1.5, 1.0}};
    const SimTrace via_family = simulate_ctmc(enumerate_family(ls, spec, RadioConfig{}), r, o);
    const SimTrace via_graph = simulate_ctmc(conflict_graph(ls, spec, RadioConfig{}), r, o);
    // Different transition bookkeeping, same law: compare loosely.
    CHECK(total_variation(via_family.occupancy(), via_graph.occupancy()) < 0.05);
}

TEST_CASE("observer sees only family states") {
    Rng rng(6);
    const auto ls = random_links(rng, {6, 4.0, 0.2, 1.0});
    const Family f = enumerate_family(ls, {Model::B1, {}}, RadioConfig{});
    SimOptions o;
    o.events = 50000;
    bool all_in = true;
    o.observer = [&](std::span<const std::uint32_t> s) {
        all_in = all_in && f.contains(FeasibleState(std::vector<std::uint32_t>(s.begin(), s.end())).mask());
    };
    simulate_ctmc(f, {std::vector<double>(6, 1.0)}, o);
    CHECK(all_in);
}

TEST_CASE("incremental-power sensing") {
    const RadioConfig c;
    SimOptions o;
    o.events = 100000;
    o.seed = 2;

    const std::vector<Link> one{{{0, 0}, {1, 0}}};
    const SimTrace solo = simulate_ipcs(one, 3.0, c, {{1.0}}, o);
    CHECK(std::abs(solo.airtime()[0] - 0.5) < 0.01);

    const std::vector<Link> close{{{0, 0}, {1, 0}}, {{2, 0}, {3, 0}}};
    bool overlap = false;
    o.observer = [&](std::span<const std::uint32_t> s) { overlap = overlap || s.size() > 1; };
    const SimTrace pair = simulate_ipcs(close, 3.0, c, {{1.0, 1.0}}, o);
    CHECK_FALSE(overlap);
    CHECK(pair.airtime()[0] == doctest::Approx(1.0 / 3.0).epsilon(0.05));

    CHECK_THROWS_AS(simulate_ipcs(one, 0.0, c, {{1.0}}, o), std::invalid_argument);
}

TEST_CASE("incremental-power sensing matches the c.1 chain") {
    Rng rng(10);
    const auto ls = random_links(rng, {5, 6.0, 0.2, 1.0});
    FamilySpec c1{Model::C1, {}};
    c1.params.r_cs = 3.0;
    const Family f = enumerate_family(ls, c1, RadioConfig{});
    const BackoffRates r{{0.5, 1.0, 2.0, 1.0, 3.0}};
    SimOptions o;
    o.events = 400000;
    const SimTrace t = simulate_ipcs(ls, 3.0, RadioConfig{}, r, o);
    CHECK(total_variation(stationary(f, r), t.occupancy()) < 0.02);
}
