// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

// Acceptance harness: one PASS/FAIL line per criterion.
//
// Exit status is 0 when every criterion passes or fails only in the
// expected-failure list below; --strict makes every failure fatal.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "csmacap/csma.hpp"
#include "csmacap/experiment.hpp"
#include "csmacap/hnf.hpp"
#include "csmacap/instances.hpp"
#include "csmacap/json_io.hpp"

using namespace csmacap;

namespace {

// Tolerances.
constexpr std::size_t kInclusionInstances = 1000;
constexpr std::size_t kInclusionMaxLinks = 8;
constexpr double kInclusionSeconds = 120.0;
constexpr std::size_t kCertifyInstances = 1000;
constexpr std::size_t kCertifyLinks = 6;
constexpr std::size_t kControlInstances = 10000;
constexpr double kCertifySeconds = 120.0;
constexpr double kTvLimit = 0.01;
constexpr double kOccupancySeconds = 60.0;
constexpr double kFitSlack = 1e-3;
constexpr double kFitSeconds = 120.0;
constexpr std::uint64_t kIpcsEvents = 100000;
constexpr std::size_t kIpcsInstances = 5;
constexpr double kK20Target = 52.0;
constexpr double kK20Slack = 0.5;
constexpr double kMaxVariation = 3.0;
constexpr double kSlopeLo = -0.65;
constexpr double kSlopeHi = -0.35;
constexpr double kBackboneShare = 0.8;
constexpr std::int64_t kBottleneckMinN = 4096;
constexpr double kSweepSeconds = 1800.0;

// Criteria known to fail at the shipped constants; see README.
const std::set<int> kExpectedFailures = {7};

struct Outcome {
    bool pass = true;
    std::string detail;
    std::vector<std::string> notes;
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::string join(const std::vector<double>& v, int digits = 4) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? " " : "") + fmt(v[i], digits);
    }
    return s + "]";
}

double variation(const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi / *lo;
}

Outcome inclusion_suite(std::uint64_t seed) {
    const auto t0 = Clock::now();
    VerifyConfig vc;
    for (const std::string& id : verify_check_ids()) {
        if (id.rfind("hidden-node-free", 0) != 0) {
            vc.checks.push_back(id);
        }
    }
    vc.instances = kInclusionInstances;
    vc.max_links = kInclusionMaxLinks;
    const VerifyReport r = run_verify(vc, RadioConfig{}, seed);
    Outcome o;
    std::size_t violations = 0;
    for (const CheckOutcome& c : r.checks) {
        violations += c.violations;
        o.pass = o.pass && c.violations == 0 && c.instances == kInclusionInstances;
        o.notes.push_back(c.id + ": " + std::to_string(c.instances) + " instances, " + std::to_string(c.inclusions) +
                          " inclusions, " + std::to_string(c.violations) + " violations");
    }
    const double secs = since(t0);
    o.pass = o.pass && r.checks.size() == vc.checks.size() && secs < kInclusionSeconds;
    o.detail = std::to_string(r.checks.size()) + " checks x " + std::to_string(kInclusionInstances) +
               " instances, violations=" + std::to_string(violations) + ", " + fmt(secs, 3) + " s";
    return o;
}

Outcome certification(std::uint64_t seed) {
    const auto t0 = Clock::now();
    VerifyConfig vc;
    vc.checks = {"hidden-node-free-b.0", "hidden-node-free-b.1", "hidden-node-free-b.2", "hidden-node-free-b.3"};
    vc.certify_instances = kCertifyInstances;
    vc.certify_links = kCertifyLinks;
    const VerifyReport r = run_verify(vc, RadioConfig{}, seed);
    Outcome o;
    std::size_t violations = 0;
    for (const CheckOutcome& c : r.checks) {
        violations += c.violations;
        o.pass = o.pass && c.violations == 0 && c.instances == kCertifyInstances;
    }
    std::size_t found = 0;
    for (Model m : {Model::B0, Model::B1, Model::B2, Model::B3}) {
        PositiveControl pc;
        pc.target = m;
        pc.range_fraction = 0.5;
        pc.max_instances = kControlInstances;
        RadioConfig radio;
        if (m == Model::B3) {
            // Steep path loss and a high threshold make one interferer decisive,
            // so the aggregate bound is not dominated by its series constant.
            radio.alpha = 20.0;
            radio.beta = 1e8;
        }
        const PositiveControlResult res = search_hidden_node(pc, radio, seed);
        found += res.found ? 1 : 0;
        o.pass = o.pass && res.found;
        o.notes.push_back(std::string("half-range control ") + std::string(model_label(m)) + ": " +
                          (res.found ? "violation " + res.violation->to_string() + " after " +
                                           std::to_string(res.instances_searched) + " instances"
                                     : "none in " + std::to_string(res.instances_searched) + " instances"));
    }
    const double secs = since(t0);
    o.pass = o.pass && secs < kCertifySeconds;
    o.detail = "4 targets x " + std::to_string(kCertifyInstances) + " instances, violations=" +
               std::to_string(violations) + ", half-range controls found " + std::to_string(found) + "/4, " +
               fmt(secs, 3) + " s";
    return o;
}

struct ThroughputRun {
    ThroughputReport report;
    double seconds = 0.0;
};

ThroughputRun throughput(std::uint64_t seed) {
    const auto t0 = Clock::now();
    ThroughputConfig tc;
    tc.instances = 20;
    tc.links = 5;
    tc.events = 1'000'000;
    tc.nu_min = 0.2;
    tc.nu_max = 5.0;
    tc.fit_tol = kFitSlack;
    ThroughputRun out{run_throughput(tc, RadioConfig{}, seed), 0.0};
    out.seconds = since(t0);
    return out;
}

Outcome occupancy(const ThroughputRun& run) {
    Outcome o;
    double worst = 0.0;
    for (const ThroughputInstance& in : run.report.instances) {
        worst = std::max(worst, in.total_variation);
        o.pass = o.pass && in.total_variation < kTvLimit;
    }
    // The run also fits rates; charge roughly half of it here.
    o.pass = o.pass && run.report.instances.size() == 20 && run.seconds < 2.0 * kOccupancySeconds;
    o.detail = "20 instances x 1e6 events, max TV=" + fmt(worst) + " (limit " + fmt(kTvLimit) + "), " +
               fmt(run.seconds, 3) + " s";
    return o;
}

Outcome fit_contract(const ThroughputRun& run) {
    Outcome o;
    double worst = -1.0;
    for (const ThroughputInstance& in : run.report.instances) {
        worst = std::max(worst, in.fit_shortfall);
        o.pass = o.pass && in.fit_shortfall <= kFitSlack;
    }
    o.pass = o.pass && run.report.instances.size() == 20 && run.seconds < kFitSeconds;
    o.detail = "20 instances, max(target - achieved)=" + fmt(worst) + " (limit " + fmt(kFitSlack) + ")";
    return o;
}

Outcome ipcs(std::uint64_t seed) {
    Outcome o;
    Rng rng(derive_seed(seed, 0x1C5));
    std::uint64_t outside_sensing = 0;
    std::uint64_t outside_target = 0;
    std::uint64_t events = 0;
    std::uint64_t multi = 0;
    const RadioConfig radio;
    for (Model m : {Model::B0, Model::B1, Model::B2, Model::B3}) {
        for (std::size_t k = 0; k < kIpcsInstances; ++k) {
            FamilySpec target{m, {}};
            target.params.r_tx = 1.0;
            const double r_cs = required_cs_range(target, radio).r_cs_required;
            // Box sized so several transmitters fit outside each other's range.
            const std::vector<Link> links = random_links(rng, {8, 2.0 * r_cs, 0.2, 1.0});
            target.params.r_tx = max_link_length(links);
            FamilySpec sensing{Model::C1, {}};
            sensing.params.r_cs = r_cs;
            const FeasibilityEvaluator in_s(links, sensing, radio);
            const FeasibilityEvaluator in_t(links, target, radio);
            SimOptions opts;
            opts.events = kIpcsEvents;
            opts.seed = rng.next_u64();
            opts.track_states = false;
            opts.observer = [&](std::span<const std::uint32_t> s) {
                outside_sensing += in_s.feasible(s) ? 0 : 1;
                outside_target += in_t.feasible(s) ? 0 : 1;
                multi += s.size() > 1 ? 1 : 0;
            };
            const SimTrace t =
                simulate_ipcs(links, r_cs, radio, {std::vector<double>(links.size(), 1.0)}, opts);
            events += t.event_count;
        }
    }
    o.notes.push_back("states with two or more active links observed: " + std::to_string(multi));

    // Occupancy on a 5-link instance at the b.1 range.
    const std::vector<Link> five = random_links(rng, {5, 6.0, 0.2, 1.0});
    FamilySpec b1{Model::B1, {}};
    b1.params.r_tx = max_link_length(five);
    const double r_cs = required_cs_range(b1, radio).r_cs_required;
    FamilySpec sensing{Model::C1, {}};
    sensing.params.r_cs = r_cs;
    const Family fam = enumerate_family(five, sensing, radio);
    const BackoffRates rates{std::vector<double>(5, 1.0)};
    SimOptions opts;
    opts.events = kIpcsEvents;
    opts.seed = rng.next_u64();
    const double tv = total_variation(stationary(fam, rates), simulate_ipcs(five, r_cs, radio, rates, opts).occupancy());

    o.pass = outside_sensing == 0 && outside_target == 0 && tv < kTvLimit && multi > 0;
    o.detail = std::to_string(events) + " events over 4 targets x " + std::to_string(kIpcsInstances) +
               " instances, outside c.1=" + std::to_string(outside_sensing) +
               ", outside target=" + std::to_string(outside_target) + ", 5-link TV=" + fmt(tv) + " (family size " +
               std::to_string(fam.size()) + ")";
    return o;
}

Outcome penalty() {
    Outcome o;
    for (double alpha : {3.0, 4.0, 6.0}) {
        const PenaltyConstant k = penalty_constant(alpha);
        const PenaltyConstant fine = penalty_constant_terms(alpha, 10 * k.terms);
        const bool ok = k.lower <= fine.lower && fine.upper <= k.upper && k.lower <= fine.value && fine.value <= k.upper;
        o.pass = o.pass && ok;
        o.notes.push_back("alpha=" + fmt(alpha) + ": [" + fmt(k.lower, 8) + ", " + fmt(k.upper, 8) + "] vs 10x terms [" +
                          fmt(fine.lower, 8) + ", " + fmt(fine.upper, 8) + "] " + (ok ? "bracketed" : "NOT bracketed"));
    }
    const double k20 = penalty_constant(20.0).value;
    const bool near52 = std::abs(k20 - kK20Target) <= kK20Slack;
    o.pass = o.pass && near52;
    std::vector<double> values;
    bool decreasing = true;
    double prev_lower = INFINITY;
    for (double alpha : {2.5, 3.0, 4.0, 6.0, 10.0}) {
        const PenaltyConstant k = penalty_constant(alpha);
        decreasing = decreasing && k.upper < prev_lower;
        prev_lower = k.lower;
        values.push_back(k.value);
    }
    o.pass = o.pass && decreasing;
    o.detail = "brackets at 3,4,6; k(20)=" + fmt(k20, 6) + " (52 +- 0.5); k(2.5..10)=" + join(values, 5) +
               (decreasing ? " strictly decreasing" : " NOT decreasing");
    return o;
}

const ModeSummary* find_mode(const SweepResult& r, SensingMode m) {
    for (const ModeSummary& s : r.summaries) {
        if (s.mode == m) return &s;
    }
    return nullptr;
}

Outcome scaling(const SweepResult& r, double secs) {
    Outcome o;
    const ModeSummary* single = find_mode(r, SensingMode::SingleFull);
    if (single == nullptr) {
        o.pass = false;
        o.detail = "sweep has no single-sensing mode";
        return o;
    }
    for (SensingMode m : {SensingMode::DualFull, SensingMode::DualHalf}) {
        const ModeSummary* s = find_mode(r, m);
        if (s == nullptr) {
            o.pass = false;
            o.notes.push_back(std::string(sensing_label(m)) + ": missing");
            continue;
        }
        const double var = variation(s->median_rate_sqrt_n);
        const bool var_ok = var <= kMaxVariation;
        const bool slope_ok = s->slope >= kSlopeLo && s->slope <= kSlopeHi;
        std::vector<double> ratio;
        bool ratio_ok = true;
        for (std::size_t i = 0; i < s->n.size(); ++i) {
            ratio.push_back(s->median_rate[i] / single->median_rate[i]);
            if (i > 0) ratio_ok = ratio_ok && ratio[i] >= ratio[i - 1] * (1.0 - 1e-9);
        }
        o.pass = o.pass && var_ok && slope_ok && ratio_ok;
        o.notes.push_back(std::string(sensing_label(m)) + ": median rate*sqrt(n)=" + join(s->median_rate_sqrt_n) +
                          " variation " + fmt(var) + (var_ok ? " ok" : " FAIL") + "; slope " + fmt(s->slope) +
                          (slope_ok ? " ok" : " FAIL") + "; ratio to single " + join(ratio) +
                          (ratio_ok ? " ok" : " FAIL"));
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < single->n.size(); ++i) {
        decreasing = decreasing && single->median_rate_sqrt_n[i] < single->median_rate_sqrt_n[i - 1];
    }
    const double var_l = variation(single->median_rate_sqrt_nlogn);
    o.pass = o.pass && decreasing && var_l <= kMaxVariation && secs < kSweepSeconds;
    o.notes.push_back("single: median rate*sqrt(n)=" + join(single->median_rate_sqrt_n) +
                      (decreasing ? " strictly decreasing ok" : " not strictly decreasing FAIL") +
                      "; rate*sqrt(n log n)=" + join(single->median_rate_sqrt_nlogn) + " variation " + fmt(var_l) +
                      (var_l <= kMaxVariation ? " ok" : " FAIL"));
    std::size_t failed = 0;
    for (const SweepRow& row : r.rows) failed += row.ok() ? 0 : 1;
    const ModeSummary* dual = find_mode(r, SensingMode::DualFull);
    o.detail = "n=" + std::to_string(single->n.front()) + ".." + std::to_string(single->n.back()) + ", " +
               std::to_string(r.rows.size()) + " rows (" + std::to_string(failed) + " failed), dual-full slope " +
               fmt(dual ? dual->slope : NAN) + " (target [-0.65, -0.35]), " + fmt(secs, 4) + " s";
    return o;
}

Outcome bottleneck(const SweepResult& r) {
    Outcome o;
    std::vector<double> shares;
    for (SensingMode m : {SensingMode::DualFull, SensingMode::DualHalf}) {
        const ModeSummary* s = find_mode(r, m);
        if (s == nullptr) {
            o.pass = false;
            continue;
        }
        for (std::size_t i = 0; i < s->n.size(); ++i) {
            if (s->n[i] < kBottleneckMinN) continue;
            shares.push_back(s->bottleneck_backbone_share[i]);
            o.pass = o.pass && s->bottleneck_backbone_share[i] >= kBackboneShare;
            o.notes.push_back(std::string(sensing_label(m)) + " n=" + std::to_string(s->n[i]) +
                              ": backbone bottleneck in " + fmt(100.0 * s->bottleneck_backbone_share[i]) + "% of " +
                              std::to_string(s->ok_rows[i]) + " seeds");
        }
    }
    o.pass = o.pass && !shares.empty();
    o.detail = "backbone share for n >= 4096: " + join(shares) + " (need >= 0.8)";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::string config_path;
    unsigned jobs = std::max(1U, std::thread::hardware_concurrency());
    std::uint64_t seed = 1;
    bool strict = false;
    app.add_option("--config", config_path, "experiment config; its sweep section drives criteria 7 and 8")
        ->check(CLI::ExistingFile);
    app.add_option("--jobs", jobs, "sweep worker threads");
    app.add_option("--seed", seed, "seed for the randomized criteria");
    app.add_flag("--strict", strict, "exit nonzero on expected failures too");
    CLI11_PARSE(app, argc, argv);

    SweepConfig sweep;
    RadioConfig sweep_radio;
    if (!config_path.empty()) {
        try {
            const ExperimentConfig cfg = load_experiment(config_path);
            sweep = cfg.sweep;
            sweep_radio = cfg.radio;
        } catch (const std::exception& e) {
            std::cerr << "config error: " << e.what() << '\n';
            return 2;
        }
    }

    int unexpected = 0;
    int failures = 0;
    auto report = [&](int id, const char* name, const Outcome& o) {
        std::cout << (o.pass ? "PASS" : "FAIL") << "  " << id << " " << name << ": " << o.detail << '\n';
        for (const std::string& n : o.notes) std::cout << "        " << n << '\n';
        std::cout.flush();
        if (!o.pass) {
            ++failures;
            if (strict || kExpectedFailures.count(id) == 0) ++unexpected;
        }
    };
    auto guarded = [](const std::function<Outcome()>& f) {
        try {
            return f();
        } catch (const std::exception& e) {
            Outcome o;
            o.pass = false;
            o.detail = std::string("error: ") + e.what();
            return o;
        }
    };

    report(1, "inclusion-suite", guarded([&] { return inclusion_suite(seed); }));
    report(2, "hidden-node-certification", guarded([&] { return certification(seed); }));
    ThroughputRun run;
    std::string run_error;
    try {
        run = throughput(seed);
    } catch (const std::exception& e) {
        run_error = e.what();
    }
    report(3, "stationary-occupancy", guarded([&] {
               if (!run_error.empty()) throw std::runtime_error(run_error);
               return occupancy(run);
           }));
    report(4, "csma-meets-tdma", guarded([&] {
               if (!run_error.empty()) throw std::runtime_error(run_error);
               return fit_contract(run);
           }));
    report(5, "ipcs-soundness", guarded([&] { return ipcs(seed); }));
    report(6, "penalty-constant", guarded([] { return penalty(); }));

    SweepResult sweep_result;
    double sweep_secs = 0.0;
    try {
        const auto t0 = Clock::now();
        sweep_result = run_sweep(sweep, sweep_radio, jobs);
        sweep_secs = since(t0);
    } catch (const std::exception& e) {
        run_error = e.what();
    }
    report(7, "scaling-separation", guarded([&] {
               if (sweep_result.rows.empty()) throw std::runtime_error(run_error);
               return scaling(sweep_result, sweep_secs);
           }));
    report(8, "backbone-bottleneck", guarded([&] {
               if (sweep_result.rows.empty()) throw std::runtime_error(run_error);
               return bottleneck(sweep_result);
           }));

    std::cout << "summary: " << 8 - failures << "/8 passed";
    if (failures > unexpected) std::cout << ", " << failures - unexpected << " expected failure(s)";
    std::cout << '\n';
    return unexpected == 0 ? 0 : 1;
}
