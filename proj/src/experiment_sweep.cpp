// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <cmath>
#include <limits>
#include <thread>

#include "csmacap/experiment.hpp"
#include "csmacap/hnf.hpp"
#include "csmacap/rng.hpp"

namespace csmacap {

namespace {

constexpr std::uint64_t kTagNetwork = 0x4E7;
constexpr std::uint64_t kTagPairs = 0x9A1;

double range_for(Model target, const RadioConfig& radio, double r_tx) {
    FamilySpec spec{target, {}};
    spec.params.r_tx = r_tx;
    const HnfCondition cond = required_cs_range(spec, radio);
    if (!std::isfinite(cond.r_cs_required)) {
        throw ConstructionError("sensing range: " + cond.diagnostic);
    }
    return cond.r_cs_required;
}

SweepRow failed_row(std::int64_t n, std::uint64_t seed, SensingMode mode, const std::string& status, int retries) {
    SweepRow row;
    row.n = n;
    row.seed = seed;
    row.mode = mode;
    row.status = status;
    row.rate = std::numeric_limits<double>::quiet_NaN();
    row.retries = retries;
    return row;
}

}  // namespace

double SweepRow::rate_sqrt_n() const { return rate * std::sqrt(static_cast<double>(n)); }

double SweepRow::rate_sqrt_nlogn() const {
    const double nd = static_cast<double>(n);
    return rate * std::sqrt(nd * std::log(nd));
}

double median(std::vector<double> v) {
    if (v.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

std::pair<double, double> sensing_ranges(SensingMode mode, Model target, const RadioConfig& radio,
                                         double r_tx_backbone, double r_tx_peripheral) {
    if (mode == SensingMode::SingleFull) {
        // One range must protect the longest link of either class.
        const double r = range_for(target, radio, std::max(r_tx_backbone, r_tx_peripheral));
        return {r, r};
    }
    return {range_for(target, radio, r_tx_backbone), range_for(target, radio, r_tx_peripheral)};
}

std::vector<SweepRow> sweep_instance(const SweepConfig& config, const RadioConfig& radio, std::int64_t n,
                                     std::uint64_t seed) {
    std::vector<SweepRow> rows;
    const auto start = std::chrono::steady_clock::now();
    const auto nu = static_cast<std::uint64_t>(n);
    const NodeSet nodes = generate_network(n, derive_seed(seed, kTagNetwork ^ (nu << 20)), config.count);
    HighwaySystem hs;
    try {
        hs = build_highways(nodes, build_grid(nodes, config.highway.c1), config.highway);
    } catch (const ConstructionError&) {
        for (SensingMode m : config.modes) {
            rows.push_back(failed_row(n, seed, m, "percolation-failed", config.highway.max_retries));
        }
        return rows;
    }
    try {
        associate_peripherals(hs);
    } catch (const ConstructionError&) {
        for (SensingMode m : config.modes) {
            rows.push_back(failed_row(n, seed, m, "association-failed", hs.retries));
        }
        return rows;
    }
    const SourceSinkPairs pairs = sample_pairs(nodes, derive_seed(seed, kTagPairs ^ (nu << 20)), config.traffic);
    RoutePlan plan = plan_routes(pairs, hs);
    if (config.hop_bounds == HopBounds::Nominal) {
        plan.backbone_hop_bound = hs.backbone_hop_bound();
        plan.peripheral_hop_bound = hs.assoc_range;
    }
    const double setup = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    for (SensingMode mode : config.modes) {
        const auto t0 = std::chrono::steady_clock::now();
        SweepRow row;
        row.n = n;
        row.seed = seed;
        row.mode = mode;
        row.retries = hs.retries;
        row.node_count = nodes.nodes.size();
        row.max_relay_load = plan.max_load(LinkClass::Backbone);
        try {
            const auto [r_b, r_p] =
                sensing_ranges(mode, config.target, radio, plan.backbone_hop_bound, plan.peripheral_hop_bound);
            row.r_cs_backbone = r_b;
            row.r_cs_peripheral = r_p;
            ScheduleSettings settings;
            settings.target = {config.target, {}};
            settings.cfg = radio;
            settings.r_cs_backbone = r_b;
            settings.r_cs_peripheral = r_p;
            settings.reuse = config.reuse;
            settings.half_duplex = mode == SensingMode::DualHalf;
            settings.certify = config.certify;
            settings.beta_floor = config.beta_floor;
            settings.weight_by_load = config.weight_by_load;
            const TwoStageSchedule sched = two_stage_schedule(plan, settings);
            const FlowRate fr = min_flow_rate(plan, sched, mode, config.stage_share);
            row.rate = fr.rate;
            row.bottleneck = fr.bottleneck_class;
        } catch (const ConstructionError&) {
            row.status = "schedule-failed";
            row.rate = std::numeric_limits<double>::quiet_NaN();
        }
        row.seconds = setup + std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ModeSummary> summarize(const std::vector<SweepRow>& rows, const std::vector<SensingMode>& modes) {
    std::vector<std::int64_t> ns;
    for (const SweepRow& r : rows) {
        ns.push_back(r.n);
    }
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

    std::vector<ModeSummary> out;
    for (SensingMode mode : modes) {
        ModeSummary s;
        s.mode = mode;
        std::vector<double> lx;
        std::vector<double> ly;
        for (std::int64_t n : ns) {
            std::vector<double> rate;
            std::vector<double> rsn;
            std::vector<double> rsnl;
            std::size_t backbone = 0;
            for (const SweepRow& r : rows) {
                if (r.n != n || r.mode != mode || !r.ok()) {
                    continue;
                }
                rate.push_back(r.rate);
                rsn.push_back(r.rate_sqrt_n());
                rsnl.push_back(r.rate_sqrt_nlogn());
                backbone += r.bottleneck == LinkClass::Backbone ? 1 : 0;
            }
            s.n.push_back(n);
            s.ok_rows.push_back(rate.size());
            s.median_rate.push_back(median(rate));
            s.median_rate_sqrt_n.push_back(median(rsn));
            s.median_rate_sqrt_nlogn.push_back(median(rsnl));
            s.bottleneck_backbone_share.push_back(
                rate.empty() ? std::numeric_limits<double>::quiet_NaN()
                             : static_cast<double>(backbone) / static_cast<double>(rate.size()));
            if (!rate.empty() && s.median_rate.back() > 0.0) {
                lx.push_back(std::log(static_cast<double>(n)));
                ly.push_back(std::log(s.median_rate.back()));
            }
        }
        s.slope = ls_slope(lx, ly);
        out.push_back(std::move(s));
    }
    return out;
}

SweepResult run_sweep(const SweepConfig& config, const RadioConfig& radio, unsigned jobs) {
    radio.validate();
    if (config.n.empty() || config.seeds == 0 || config.modes.empty()) {
        throw ConfigError("sweep: n list, seed count and mode list must be nonempty");
    }
    for (std::int64_t n : config.n) {
        if (n < 64) {
            throw ConfigError("sweep: every n must be at least 64");
        }
    }
    std::vector<std::pair<std::int64_t, std::uint64_t>> tasks;
    for (std::int64_t n : config.n) {
        for (std::size_t k = 0; k < config.seeds; ++k) {
            tasks.emplace_back(n, config.first_seed + k);
        }
    }
    std::vector<std::vector<SweepRow>> results(tasks.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(tasks.size());
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            try {
                results[i] = sweep_instance(config, radio, tasks[i].first, tasks[i].second);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned threads = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (std::thread& t : pool) {
        t.join();
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    SweepResult out;
    for (auto& r : results) {
        out.rows.insert(out.rows.end(), r.begin(), r.end());
    }
    std::stable_sort(out.rows.begin(), out.rows.end(), [](const SweepRow& a, const SweepRow& b) {
        if (a.n != b.n) {
            return a.n < b.n;
        }
        if (a.seed != b.seed) {
            return a.seed < b.seed;
        }
        return a.mode < b.mode;
    });
    out.summaries = summarize(out.rows, config.modes);
    return out;
}

}  // namespace csmacap
