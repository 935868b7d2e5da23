// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#include <doctest.h>

#include "csmacap/csma.hpp"
#include "csmacap/experiment.hpp"
#include "csmacap/instances.hpp"

using namespace csmacap;

namespace {

Family conflicting_pair() { return Family(2, {0b00, 0b01, 0b10}); }

}  // namespace

TEST_CASE("uniform targets on a conflicting pair give unit rates") {
    const double t[] = {1.0 / 3.0, 1.0 / 3.0};
    FitOptions o;
    o.tol = 1e-6;
    const FitReport r = fit_rates(conflicting_pair(), t, o);
    CHECK(r.rates.nu[0] == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(r.rates.nu[1] == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("max-entropy rates for unequal targets") {
    // z = (1/4, 1/2, 1/4) over (empty, {0}, {1}); nu_i = z_i / z_empty.
    const double t[] = {0.5, 0.25};
    FitOptions o;
    o.tol = 1e-6;
    const FitReport r = fit_rates(conflicting_pair(), t, o);
    CHECK(r.rates.nu[0] == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(r.rates.nu[1] == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(r.max_violation <= 1e-6);
}

TEST_CASE("overloaded clique is rejected with a certificate") {
    const double t[] = {0.6, 0.6};
    try {
        fit_rates(conflicting_pair(), t);
        FAIL("expected InfeasibleTargets");
    } catch (const InfeasibleTargets& e) {
        CHECK(e.clique() == std::vector<std::uint32_t>{0, 1});
        CHECK(e.load() == doctest::Approx(1.2));
    }
}

TEST_CASE("fit_rates input validation") {
    const double bad[] = {1.5, 0.1};
    CHECK_THROWS_AS(fit_rates(conflicting_pair(), bad), std::invalid_argument);
    const double short_list[] = {0.1};
    CHECK_THROWS_AS(fit_rates(conflicting_pair(), short_list), std::invalid_argument);
}

TEST_CASE("CSMA meets the throughput of any positive schedule") {
    Rng rng(55);
    for (int k = 0; k < 15; ++k) {
        const auto ls = random_links(rng, {5, 5.0, 0.2, 1.0});
        const Family f = enumerate_family(ls, {Model::B1, {}}, RadioConfig{});
        const Schedule s = covering_schedule(f, 6, 100 + k);
        for (const FeasibleState& st : s.states) {
            REQUIRE(f.contains(st.mask()));
        }
        const std::vector<double> targets = tdma_throughput(s);
        const FitReport r = fit_rates(f, targets);
        const StationaryDistribution d = stationary(f, r.rates);
        for (std::size_t i = 0; i < targets.size(); ++i) {
            CHECK(d.throughput[i] >= targets[i] - 1e-3);
        }
    }
}

TEST_CASE("single link throughput is nu / (1 + nu)") {
    const Family f(1, {0, 1});
    for (double nu : {0.2, 1.0, 5.0}) {
        CHECK(stationary(f, {{nu}}).throughput[0] == doctest::Approx(nu / (1.0 + nu)).epsilon(1e-14));
    }
}

TEST_CASE("throughput experiment at reduced scale") {
    ThroughputConfig tc;
    tc.instances = 4;
    tc.events = 200000;
    const ThroughputReport r = run_throughput(tc, RadioConfig{}, 1);
    REQUIRE(r.instances.size() == 4);
    for (const ThroughputInstance& in : r.instances) {
        CHECK(in.total_variation < 0.02);
        CHECK(in.fit_shortfall <= 1e-3);
        CHECK(in.nu.size() == tc.links);
    }
    tc.links = 0;
    CHECK_THROWS_AS(run_throughput(tc, RadioConfig{}, 1), ConfigError);
}
