// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "csmacap/hnf.hpp"
#include "csmacap/instances.hpp"

using namespace csmacap;

namespace {

// Direct partial sum; the remainder past `terms` is below 1e-6 for the
// exponents used here.
double k_oracle(double alpha, long terms) {
    double s = 0.0;
    for (long k = terms; k >= 1; --k) {
        const double kd = static_cast<double>(k);
        s += 4.0 * std::ceil(std::numbers::pi * (2.0 * kd + 2.0)) * std::pow(kd, -alpha);
    }
    return s;
}

}  // namespace

TEST_CASE("penalty constant rejects divergent exponents") {
    CHECK_THROWS_AS(penalty_constant(2.0), std::invalid_argument);
    CHECK_THROWS_AS(penalty_constant(1.5), std::invalid_argument);
    CHECK_THROWS_AS(penalty_constant(4.0, 0.0), std::invalid_argument);
}

TEST_CASE("penalty constant encloses the direct sum") {
    for (double alpha : {4.0, 6.0, 10.0}) {
        const PenaltyConstant k = penalty_constant(alpha, 1e-6);
        const double ref = k_oracle(alpha, 300000);
        CHECK(k.lower <= ref + 1e-9);
        CHECK(k.upper >= ref - 1e-9);
        CHECK(k.upper - k.lower <= 1e-6);
    }
}

TEST_CASE("penalty constant at alpha 4") {
    const PenaltyConstant k = penalty_constant(4.0);
    CHECK(k.value == doctest::Approx(59.3).epsilon(0.2 / 59.3));
    // Frozen from the direct sum above.
    CHECK(k.value == doctest::Approx(59.2415).epsilon(1e-4));
}

TEST_CASE("penalty constant approaches the first term for large alpha") {
    CHECK(penalty_constant(20.0).value == doctest::Approx(52.0).epsilon(0.5 / 52.0));
    CHECK(penalty_constant(40.0).value == doctest::Approx(52.0).epsilon(1e-6));
}

TEST_CASE("penalty constant decreases in alpha and enclosures nest") {
    double prev = INFINITY;
    for (double alpha : {2.5, 3.0, 4.0, 6.0, 10.0}) {
        const PenaltyConstant k = penalty_constant(alpha);
        CHECK(k.upper < prev);
        prev = k.lower;
        const PenaltyConstant coarse = penalty_constant_terms(alpha, 100);
        const PenaltyConstant fine = penalty_constant_terms(alpha, 1000);
        CHECK(fine.lower >= coarse.lower - 1e-9);
        CHECK(fine.upper <= coarse.upper + 1e-9);
    }
}

TEST_CASE("bidirectional margin") {
    CHECK(bidir_margin(1.0, 4.0) == doctest::Approx(81.0));
    CHECK(bidir_margin(1e-300, 4.0) == doctest::Approx(16.0));
    CHECK(bidir_margin(0.0, 3.0) == doctest::Approx(8.0));
}

TEST_CASE("exclusion ranges") {
    RadioConfig c;
    CHECK(pairwise_exclusion_range(16.0, 1.0, c) == doctest::Approx(2.0));
    c.n0 = 0.5;
    // 1 / beta - n0 = 1/4 - 1/2 < 0: noise alone breaks the link.
    CHECK(std::isinf(pairwise_exclusion_range(4.0, 1.0, c)));
    c.n0 = 0.25 - 1.0 / 16.0;
    CHECK(pairwise_exclusion_range(4.0, 1.0, c) == doctest::Approx(2.0));
    c.n0 = 0.0;
    CHECK(aggregate_exclusion_range(1.0, 1.0, 16.0, c) == doctest::Approx(3.0));
}

TEST_CASE("required sensing ranges at the default radio") {
    RadioConfig c;
    CHECK(required_cs_range({Model::B0, {}}, c).r_cs_required == doctest::Approx(4.0));
    CHECK(required_cs_range({Model::B1, {}}, c).r_cs_required == doctest::Approx(4.0));
    CHECK(required_cs_range({Model::B2, {}}, c).r_cs_required == doctest::Approx(5.0));
    const HnfCondition b3 = required_cs_range({Model::B3, {}}, c);
    CHECK(b3.r_cs_required == doctest::Approx(11.33).epsilon(0.01 / 11.33));
    CHECK(b3.r_cs_required == doctest::Approx(std::pow(59.2415 * 81.0, 0.25) + 3.0).epsilon(1e-5));
    CHECK_FALSE(b3.chain.empty());
    CHECK_THROWS_AS(required_cs_range({Model::A1, {}}, c), std::invalid_argument);
}

TEST_CASE("unattainable range is reported, not thrown") {
    RadioConfig c;
    c.n0 = 0.1;  // above 1/81
    const HnfCondition r = required_cs_range({Model::B2, {}}, c);
    CHECK(std::isinf(r.r_cs_required));
    CHECK_FALSE(r.diagnostic.empty());
}

TEST_CASE("ranges scale with r_tx") {
    RadioConfig c;
    for (Model m : {Model::B1, Model::B2, Model::B3}) {
        FamilySpec s{m, {}};
        s.params.r_tx = 2.5;
        const double scaled = required_cs_range(s, c).r_cs_required;
        CHECK(scaled == doctest::Approx(2.5 * required_cs_range({m, {}}, c).r_cs_required));
    }
}

TEST_CASE("certify_hnf on random instances") {
    CHECK(certify_hnf({}, 1.0, {Model::B1, {}}, RadioConfig{}).certified);
    CHECK_THROWS_AS(certify_hnf({}, 0.0, {Model::B1, {}}, RadioConfig{}), std::invalid_argument);
    Rng rng(8);
    for (Model m : {Model::B0, Model::B1, Model::B2, Model::B3}) {
        FamilySpec t{m, {}};
        const double r = required_cs_range(t, RadioConfig{}).r_cs_required;
        for (int k = 0; k < 100; ++k) {
            const auto ls = random_links(rng, {6, 1.5 * r, 0.2, 1.0});
            const CertifyResult res = certify_hnf(ls, r, t, RadioConfig{});
            REQUIRE_MESSAGE(res.certified, model_label(m));
            CHECK(res.states_checked >= 1);
        }
    }
}

TEST_CASE("sampled certification agrees on a violating instance") {
    // Receivers facing each other, transmitters 3 apart: sensing at 2.5
    // admits both, but the receivers are 1 apart.
    const std::vector<Link> ls{{{0, 0}, {1, 0}}, {{3, 0}, {2, 0}}};
    CertifyOptions o;
    const CertifyResult ex = certify_hnf(ls, 2.5, {Model::B1, {}}, RadioConfig{}, o);
    CHECK_FALSE(ex.certified);
    REQUIRE(ex.violation);
    CHECK(ex.violation->to_string() == "{0,1}");
    o.mode = CertifyMode::Sampled;
    o.samples = 50;
    CHECK_FALSE(certify_hnf(ls, 2.5, {Model::B1, {}}, RadioConfig{}, o).certified);
}
