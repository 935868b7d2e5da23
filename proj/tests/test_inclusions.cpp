// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#include <doctest.h>

#include <cmath>

#include "csmacap/experiment.hpp"
#include "csmacap/hnf.hpp"
#include "csmacap/instances.hpp"

using namespace csmacap;

namespace {

FamilySpec spec_delta(Model m, double d) {
    FamilySpec s{m, {}};
    s.params.delta = d;
    return s;
}

FamilySpec spec_beta(Model m, double b) {
    FamilySpec s{m, {}};
    s.params.beta = b;
    return s;
}

}  // namespace

// Hand-rolled instance loops with their own random draws, separate from the
// run_verify tables.
TEST_CASE("SIR guard zone widened by two link lengths gives bidirectional safety") {
    Rng rng(404);
    for (int k = 0; k < 300; ++k) {
        LinkBoxParams p;
        p.count = 2 + rng.below(5);
        p.side = 4.0;
        const auto ls = random_links(rng, p);
        const double delta = rng.uniform(0.1, 1.5);
        CHECK(check_inclusion(spec_delta(Model::B1, delta), spec_delta(Model::A1, delta + 2.0), ls, RadioConfig{}).holds);
    }
}

TEST_CASE("SIR guard zone without the margin fails somewhere") {
    Rng rng(405);
    bool found = false;
    for (int k = 0; k < 2000 && !found; ++k) {
        LinkBoxParams p;
        p.count = 4;
        p.side = 3.0;
        const auto ls = random_links(rng, p);
        found = !check_inclusion(spec_delta(Model::B1, 0.5), spec_delta(Model::A1, 0.5), ls, RadioConfig{}).holds;
    }
    CHECK(found);
}

TEST_CASE("inflated SINR threshold gives bidirectional safety") {
    Rng rng(406);
    for (int k = 0; k < 300; ++k) {
        LinkBoxParams p;
        p.count = 2 + rng.below(5);
        p.side = 4.0;
        const auto ls = random_links(rng, p);
        RadioConfig c;
        c.alpha = rng.uniform(2.2, 6.0);
        const double beta = rng.uniform(0.3, 5.0);
        const double wide = bidir_margin(beta, c.alpha);
        CHECK(check_inclusion(spec_beta(Model::B2, beta), spec_beta(Model::A2, wide), ls, c).holds);
        CHECK(check_inclusion(spec_beta(Model::B3, beta), spec_beta(Model::A3, wide), ls, c).holds);
    }
}

TEST_CASE("sensing sandwich around the bidirectional fixed-range family") {
    Rng rng(407);
    for (int k = 0; k < 300; ++k) {
        LinkBoxParams p;
        p.count = 2 + rng.below(5);
        p.side = 5.0;
        const auto ls = random_links(rng, p);
        RadioConfig c;
        c.r_tx = max_link_length(ls);
        c.r_xcl = rng.uniform(0.5, 2.5);
        FamilySpec b0{Model::B0, {}};
        FamilySpec inner{Model::C1, {}};
        inner.params.r_cs = c.r_xcl + 2.0 * c.r_tx;
        FamilySpec outer{Model::C1, {}};
        outer.params.r_cs = c.r_xcl;
        CHECK(check_inclusion(b0, inner, ls, c).holds);
        CHECK(check_inclusion(outer, b0, ls, c).holds);
    }
}

TEST_CASE("run_verify at reduced scale passes every check") {
    VerifyConfig vc;
    vc.checks = verify_check_ids();
    vc.instances = 60;
    vc.certify_instances = 60;
    const VerifyReport r = run_verify(vc, RadioConfig{}, 3);
    REQUIRE(r.checks.size() == verify_check_ids().size());
    for (const CheckOutcome& c : r.checks) {
        CHECK_MESSAGE(c.violations == 0, c.id);
        CHECK(c.instances == 60);
    }
    CHECK(r.passed());
}

TEST_CASE("stripped margins are caught by the inclusion checks") {
    VerifyConfig vc;
    vc.checks = {"bidir-sir", "bidir-fixed-range", "sensing-fixed-range", "hidden-node-free-b.0"};
    vc.instances = 300;
    vc.certify_instances = 300;
    vc.strip_margins = true;
    const VerifyReport r = run_verify(vc, RadioConfig{}, 3);
    CHECK_FALSE(r.passed());
    for (const CheckOutcome& c : r.checks) {
        CHECK_MESSAGE(c.violations > 0, c.id);
        if (c.violations > 0) {
            CHECK(c.counterexample.has_value());
            CHECK_FALSE(c.counterexample_links.empty());
        }
    }
}

TEST_CASE("verify selection handling") {
    VerifyConfig vc;
    const VerifyReport empty = run_verify(vc, RadioConfig{}, 1);
    CHECK(empty.checks.empty());
    CHECK(empty.passed());
    CHECK(empty.warnings.size() == 1);
    vc.checks = {"no-such-check"};
    CHECK_THROWS_AS(run_verify(vc, RadioConfig{}, 1), ConfigError);
}

TEST_CASE("verify output depends only on the seed") {
    VerifyConfig vc;
    vc.checks = {"bidir-sir"};
    vc.instances = 200;
    vc.strip_margins = true;
    const VerifyReport a = run_verify(vc, RadioConfig{}, 9);
    const VerifyReport b = run_verify(vc, RadioConfig{}, 9);
    CHECK(a.checks[0].violations == b.checks[0].violations);
    CHECK(a.checks[0].counterexample == b.checks[0].counterexample);
}

TEST_CASE("positive control finds a hidden node at half range") {
    for (Model m : {Model::B0, Model::B1, Model::B2}) {
        PositiveControl pc;
        pc.target = m;
        const PositiveControlResult r = search_hidden_node(pc, RadioConfig{}, 1);
        CHECK_MESSAGE(r.found, model_label(m));
    }
}
