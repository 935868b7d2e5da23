// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>

#include "csmacap/experiment.hpp"
#include "csmacap/hnf.hpp"
#include "csmacap/instances.hpp"
#include "csmacap/rng.hpp"

namespace csmacap {

namespace {

constexpr std::uint64_t kTagVerify = 0x7E21F1;
constexpr std::array<double, 6> kAlphas = {2.5, 3.0, 3.5, 4.0, 5.0, 6.0};

/// One instance of a check: links, radio, and the inclusions outer ⊇ inner.
struct Trial {
    std::vector<Link> links;
    RadioConfig cfg;
    std::vector<std::pair<FamilySpec, FamilySpec>> inclusions;
};

using TrialMaker = std::function<Trial(Rng&, bool strip)>;

struct CheckDef {
    std::string id;
    std::string statement;
    TrialMaker make;
    bool certify = false;  ///< hidden-node certification rather than inclusion
    Model target = Model::B0;
};

FamilySpec with_delta(Model m, double delta) {
    FamilySpec s{m, {}};
    s.params.delta = delta;
    return s;
}

FamilySpec with_beta(Model m, double beta) {
    FamilySpec s{m, {}};
    s.params.beta = beta;
    return s;
}

FamilySpec fixed_range(Model m, double r_xcl, double r_tx) {
    FamilySpec s{m, {}};
    s.params.r_xcl = r_xcl;
    s.params.r_tx = r_tx;
    return s;
}

FamilySpec sensing(double r_cs) {
    FamilySpec s{Model::C1, {}};
    s.params.r_cs = r_cs;
    return s;
}

const PenaltyConstant& cached_k(double alpha) {
    static const std::map<double, PenaltyConstant> table = [] {
        std::map<double, PenaltyConstant> t;
        for (double a : kAlphas) {
            t.emplace(a, penalty_constant(a));
        }
        return t;
    }();
    return table.at(alpha);
}

/// Random link set and a radio config with a random exponent; r_tx is set
/// to the longest link.
Trial base_trial(Rng& rng, const RadioConfig& radio, std::size_t max_links, double side) {
    Trial t;
    const std::size_t count = 2 + rng.below(max_links - 1);
    t.links = random_links(rng, {count, side, 0.2, 1.0});
    t.cfg = radio;
    t.cfg.alpha = kAlphas[rng.below(kAlphas.size())];
    t.cfg.r_tx = max_link_length(t.links);
    return t;
}

/// Noise below the level where the longest link still clears beta.
double random_noise(Rng& rng, const RadioConfig& cfg, double beta) {
    return rng.uniform(0.0, 0.5) * cfg.p_tx * std::pow(cfg.r_tx, -cfg.alpha) / beta;
}

std::vector<CheckDef> check_table(const RadioConfig& radio, std::size_t max_links) {
    std::vector<CheckDef> defs;
    defs.push_back({"uni-sir-sinr-aggregate", "a.1[delta] ⊇ a.2[beta] ⊇ a.3[beta] when delta <= beta^(1/alpha) - 1",
                    [radio, max_links](Rng& rng, bool strip) {
                        Trial t = base_trial(rng, radio, max_links, 4.0);
                        const double beta = rng.uniform(1.5, 20.0);
                        t.cfg.n0 = random_noise(rng, t.cfg, beta);
                        const double limit = std::pow(beta, 1.0 / t.cfg.alpha) - 1.0;
                        const double delta = strip ? 2.0 * limit + 0.5 : limit * rng.uniform(0.1, 1.0);
                        t.inclusions = {{with_delta(Model::A1, delta), with_beta(Model::A2, beta)},
                                        {with_beta(Model::A2, beta), with_beta(Model::A3, beta)}};
                        return t;
                    }});
    defs.push_back({"aggregate-over-fixed-range",
                    "a.3[beta] ⊇ a.0[r_xcl, r_tx] when r_xcl >= ag_range(beta, k(alpha)) + r_tx",
                    [radio, max_links](Rng& rng, bool strip) {
                        Trial t = base_trial(rng, radio, max_links, 8.0);
                        const double beta = rng.uniform(0.5, 10.0);
                        t.cfg.n0 = random_noise(rng, t.cfg, beta);
                        const double r_xcl =
                            strip ? pairwise_exclusion_range(beta, t.cfg.r_tx, t.cfg)
                                  : aggregate_exclusion_range(beta, t.cfg.r_tx, cached_k(t.cfg.alpha).upper, t.cfg) *
                                        rng.uniform(1.0, 1.2);
                        t.inclusions = {{with_beta(Model::A3, beta), fixed_range(Model::A0, r_xcl, t.cfg.r_tx)}};
                        return t;
                    }});
    defs.push_back({"bidir-fixed-range", "a.0[r_xcl] ⊇ b.0[r_xcl] ⊇ a.0[r'_xcl] when r'_xcl >= r_xcl + 2 r_tx",
                    [radio, max_links](Rng& rng, bool strip) {
                        Trial t = base_trial(rng, radio, max_links, 5.0);
                        const double r_xcl = rng.uniform(0.5, 3.0);
                        const double wider = strip ? r_xcl : r_xcl + 2.0 * t.cfg.r_tx + rng.uniform(0.0, 0.5);
                        t.inclusions = {
                            {fixed_range(Model::A0, r_xcl, t.cfg.r_tx), fixed_range(Model::B0, r_xcl, t.cfg.r_tx)},
                            {fixed_range(Model::B0, r_xcl, t.cfg.r_tx), fixed_range(Model::A0, wider, t.cfg.r_tx)}};
                        return t;
                    }});
    defs.push_back({"bidir-sir", "a.1[delta] ⊇ b.1[delta] ⊇ a.1[delta'] when delta' >= delta + 2",
                    [radio, max_links](Rng& rng, bool strip) {
                        Trial t = base_trial(rng, radio, max_links, 5.0);
                        const double delta = rng.uniform(0.1, 2.0);
                        const double wider = strip ? delta : delta + 2.0 + rng.uniform(0.0, 0.5);
                        t.inclusions = {{with_delta(Model::A1, delta), with_delta(Model::B1, delta)},
                                        {with_delta(Model::B1, delta), with_delta(Model::A1, wider)}};
                        return t;
                    }});
    defs.push_back({"bidir-pairwise-sinr", "a.2[beta] ⊇ b.2[beta] ⊇ a.2[beta'] when beta' >= (2 + beta^(1/alpha))^alpha",
                    [radio, max_links](Rng& rng, bool strip) {
                        Trial t = base_trial(rng, radio, max_links, 5.0);
                        const double beta = rng.uniform(0.5, 10.0);
                        t.cfg.n0 = random_noise(rng, t.cfg, beta);
                        const double wider = strip ? beta : bidir_margin(beta, t.cfg.alpha) * rng.uniform(1.0, 1.1);
                        t.inclusions = {{with_beta(Model::A2, beta), with_beta(Model::B2, beta)},
                                        {with_beta(Model::B2, beta), with_beta(Model::A2, wider)}};
                        return t;
                    }});
    defs.push_back({"bidir-aggregate-sinr", "a.3[beta] ⊇ b.3[beta] ⊇ a.3[beta'] when beta' >= (2 + beta^(1/alpha))^alpha",
                    [radio, max_links](Rng& rng, bool strip) {
                        Trial t = base_trial(rng, radio, max_links, 5.0);
                        const double beta = rng.uniform(0.5, 10.0);
                        t.cfg.n0 = random_noise(rng, t.cfg, beta);
                        const double wider = strip ? beta : bidir_margin(beta, t.cfg.alpha) * rng.uniform(1.0, 1.1);
                        t.inclusions = {{with_beta(Model::A3, beta), with_beta(Model::B3, beta)},
                                        {with_beta(Model::B3, beta), with_beta(Model::A3, wider)}};
                        return t;
                    }});
    defs.push_back({"sensing-fixed-range", "c.1[r_xcl] ⊇ b.0[r_xcl, r_tx] ⊇ c.1[r_cs] when r_cs >= r_xcl + 2 r_tx",
                    [radio, max_links](Rng& rng, bool strip) {
                        Trial t = base_trial(rng, radio, max_links, 5.0);
                        const double r_xcl = rng.uniform(0.5, 3.0);
                        const double r_cs = strip ? r_xcl : r_xcl + 2.0 * t.cfg.r_tx + rng.uniform(0.0, 0.5);
                        t.inclusions = {{sensing(r_xcl), fixed_range(Model::B0, r_xcl, t.cfg.r_tx)},
                                        {fixed_range(Model::B0, r_xcl, t.cfg.r_tx), sensing(r_cs)}};
                        return t;
                    }});
    defs.push_back({"pairwise-sinr-over-fixed-range", "a.2[beta] ⊇ a.0[r_xcl, r_tx] when r_xcl >= pw_range(beta)",
                    [radio, max_links](Rng& rng, bool strip) {
                        Trial t = base_trial(rng, radio, max_links, 4.0);
                        const double beta = rng.uniform(0.5, 10.0);
                        t.cfg.n0 = random_noise(rng, t.cfg, beta);
                        const double r = pairwise_exclusion_range(beta, t.cfg.r_tx, t.cfg);
                        const double r_xcl = strip ? 0.7 * r : r * rng.uniform(1.0, 1.2);
                        t.inclusions = {{with_beta(Model::A2, beta), fixed_range(Model::A0, r_xcl, t.cfg.r_tx)}};
                        return t;
                    }});
    defs.push_back({"pairwise-sinr-over-sensing", "a.2[beta] ⊇ c.1[r_cs] when r_cs >= pw_range(beta) + 2 r_tx",
                    [radio, max_links](Rng& rng, bool strip) {
                        Trial t = base_trial(rng, radio, max_links, 6.0);
                        const double beta = rng.uniform(0.5, 10.0);
                        t.cfg.n0 = random_noise(rng, t.cfg, beta);
                        const double r = pairwise_exclusion_range(beta, t.cfg.r_tx, t.cfg);
                        const double r_cs = strip ? 0.7 * r : (r + 2.0 * t.cfg.r_tx) * rng.uniform(1.0, 1.2);
                        t.inclusions = {{with_beta(Model::A2, beta), sensing(r_cs)}};
                        return t;
                    }});
    for (Model m : {Model::B0, Model::B1, Model::B2, Model::B3}) {
        CheckDef d;
        d.id = "hidden-node-free-" + std::string(model_label(m));
        d.statement = std::string(model_label(m)) + " ⊇ c.1[required_cs_range]";
        d.certify = true;
        d.target = m;
        defs.push_back(std::move(d));
    }
    return defs;
}

}  // namespace

const std::vector<std::string>& verify_check_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> out;
        for (const CheckDef& d : check_table(RadioConfig{}, 8)) {
            out.push_back(d.id);
        }
        return out;
    }();
    return ids;
}

bool VerifyReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckOutcome& c) { return c.violations == 0; });
}

VerifyReport run_verify(const VerifyConfig& config, const RadioConfig& radio, std::uint64_t seed) {
    radio.validate();
    if (config.max_links < 2 || config.max_links > kDefaultEnumerationCap) {
        throw ConfigError("verify.max_links must lie in [2, 20]");
    }
    if (config.certify_links < 1 || config.certify_links > kDefaultEnumerationCap) {
        throw ConfigError("verify.certify_links must lie in [1, 20]");
    }
    const std::vector<CheckDef> defs = check_table(radio, config.max_links);
    for (const std::string& id : config.checks) {
        if (std::none_of(defs.begin(), defs.end(), [&](const CheckDef& d) { return d.id == id; })) {
            throw ConfigError("unknown verify check: " + id);
        }
    }
    VerifyReport report;
    if (config.checks.empty()) {
        report.warnings.push_back("no checks selected; nothing was verified");
        return report;
    }
    for (std::size_t idx = 0; idx < defs.size(); ++idx) {
        const CheckDef& def = defs[idx];
        if (std::find(config.checks.begin(), config.checks.end(), def.id) == config.checks.end()) {
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        CheckOutcome out;
        out.id = def.id;
        out.statement = def.statement;
        Rng rng(derive_seed(seed, kTagVerify + idx));
        if (def.certify) {
            // Links are rescaled so the longest is exactly r_tx = 1.
            RadioConfig cfg = radio;
            cfg.r_tx = 1.0;
            FamilySpec target{def.target, {}};
            target.params.r_tx = 1.0;
            const HnfCondition cond = required_cs_range(target, cfg);
            if (!std::isfinite(cond.r_cs_required)) {
                throw ConfigError("verify: " + cond.diagnostic);
            }
            const double r_cs = config.strip_margins ? 0.5 * cond.r_cs_required : cond.r_cs_required;
            for (std::size_t k = 0; k < config.certify_instances; ++k) {
                // Spread transmitters so that sensing admits multi-link states.
                std::vector<Link> links = random_links(rng, {config.certify_links, 1.5 * r_cs, 0.2, 1.0});
                const double scale = 1.0 / max_link_length(links);
                for (Link& l : links) {
                    l.rx = {l.tx.x + (l.rx.x - l.tx.x) * scale, l.tx.y + (l.rx.y - l.tx.y) * scale};
                }
                const CertifyResult res = certify_hnf(links, r_cs, target, cfg);
                ++out.instances;
                ++out.inclusions;
                if (!res.certified) {
                    ++out.violations;
                    if (!out.counterexample) {
                        out.counterexample = res.violation;
                        out.counterexample_links = links;
                    }
                }
            }
        } else {
            for (std::size_t k = 0; k < config.instances; ++k) {
                const Trial t = def.make(rng, config.strip_margins);
                ++out.instances;
                for (const auto& [outer, inner] : t.inclusions) {
                    const InclusionResult res = check_inclusion(outer, inner, t.links, t.cfg);
                    ++out.inclusions;
                    if (!res.holds) {
                        ++out.violations;
                        if (!out.counterexample) {
                            out.counterexample = res.counterexample;
                            out.counterexample_links = t.links;
                        }
                    }
                }
            }
        }
        out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        report.checks.push_back(std::move(out));
    }
    return report;
}

PositiveControlResult search_hidden_node(const PositiveControl& control, const RadioConfig& radio,
                                         std::uint64_t seed) {
    radio.validate();
    PositiveControlResult out;
    FamilySpec target{control.target, {}};
    RadioConfig cfg = radio;
    cfg.r_tx = 1.0;
    target.params.r_tx = 1.0;
    const HnfCondition full = required_cs_range(target, cfg);
    if (!std::isfinite(full.r_cs_required)) {
        throw ConfigError("positive control: " + full.diagnostic);
    }
    // Spacing at the reduced range for the longest possible links; the
    // range for shorter links is smaller, so sensing admits the pair.
    const double spacing = control.range_fraction * full.r_cs_required;
    Rng rng(derive_seed(seed, kTagVerify ^ 0xADu));
    for (std::size_t k = 0; k < control.max_instances; ++k) {
        FacingPairParams fp;
        fp.pairs = 1 + rng.below(2);
        fp.spacing = spacing;
        fp.length = 1.0;
        fp.jitter = 0.02;
        fp.padding = {6 - 2 * fp.pairs, 2.0 * spacing, 0.2, 1.0};
        const std::vector<Link> links = facing_pairs(rng, fp);
        cfg.r_tx = max_link_length(links);
        target.params.r_tx = cfg.r_tx;
        const double r_cs = control.range_fraction * required_cs_range(target, cfg).r_cs_required;
        ++out.instances_searched;
        const CertifyResult res = certify_hnf(links, r_cs, target, cfg);
        if (!res.certified) {
            out.found = true;
            out.r_cs = r_cs;
            out.violation = res.violation;
            out.links = links;
            return out;
        }
    }
    return out;
}

}  // namespace csmacap
