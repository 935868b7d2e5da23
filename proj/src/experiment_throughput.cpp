// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#include <algorithm>

#include "csmacap/csma.hpp"
#include "csmacap/experiment.hpp"
#include "csmacap/instances.hpp"
#include "csmacap/rng.hpp"

namespace csmacap {

namespace {

constexpr std::uint64_t kTagThroughput = 0x7B0;

}  // namespace

Schedule covering_schedule(const Family& family, std::size_t extra_slots, std::uint64_t seed) {
    Schedule s;
    s.link_count = family.link_count();
    const auto masks = family.masks();
    for (LinkMask m : masks) {
        s.states.push_back(FeasibleState::from_mask(m));
    }
    Rng rng(seed);
    for (std::size_t k = 0; k < extra_slots; ++k) {
        s.states.push_back(FeasibleState::from_mask(masks[rng.below(masks.size())]));
    }
    return s;
}

bool ThroughputReport::passed() const {
    return std::all_of(instances.begin(), instances.end(), [&](const ThroughputInstance& i) {
        return i.total_variation < tv_limit && i.fit_shortfall <= fit_tol;
    });
}

ThroughputReport run_throughput(const ThroughputConfig& config, const RadioConfig& radio, std::uint64_t seed) {
    radio.validate();
    if (config.links < 1 || config.links > kDefaultEnumerationCap) {
        throw ConfigError("throughput.links must lie in [1, 20]");
    }
    if (!(config.nu_min > 0.0) || !(config.nu_max >= config.nu_min)) {
        throw ConfigError("throughput: need 0 < nu_min <= nu_max");
    }
    ThroughputReport report;
    report.fit_tol = config.fit_tol;
    Rng rng(derive_seed(seed, kTagThroughput));
    FamilySpec sensing{Model::C1, {}};
    sensing.params.r_cs = config.r_cs;
    for (std::size_t k = 0; k < config.instances; ++k) {
        const std::vector<Link> links = random_links(rng, {config.links, config.box_side, 0.2, 1.0});
        const Family family = enumerate_family(links, sensing, radio);
        ThroughputInstance inst;
        inst.family_size = family.size();

        BackoffRates rates;
        for (std::size_t i = 0; i < links.size(); ++i) {
            rates.nu.push_back(rng.uniform(config.nu_min, config.nu_max));
        }
        const StationaryDistribution exact = stationary(family, rates);
        SimOptions opts;
        opts.events = config.events;
        opts.seed = derive_seed(seed, kTagThroughput + 1 + k);
        const SimTrace trace = simulate_ctmc(family, rates, opts);
        inst.total_variation = total_variation(exact, trace.occupancy());
        inst.nu = rates.nu;

        const Schedule tdma = covering_schedule(family, config.schedule_slots, derive_seed(seed, 0x5C4ED + k));
        inst.targets = tdma_throughput(tdma);
        FitOptions fo;
        fo.tol = config.fit_tol;
        const FitReport fit = fit_rates(family, inst.targets, fo);
        inst.fit_iterations = fit.iterations;
        inst.achieved = stationary(family, fit.rates).throughput;
        inst.fit_shortfall = 0.0;
        for (std::size_t i = 0; i < links.size(); ++i) {
            inst.fit_shortfall = std::max(inst.fit_shortfall, inst.targets[i] - inst.achieved[i]);
        }
        report.instances.push_back(std::move(inst));
    }
    return report;
}

}  // namespace csmacap
