// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors
//
// capcli: network generation, verification suites, throughput checks,
// capacity sweeps and IPCS simulation from one JSON config.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csmacap/csma.hpp"
#include "csmacap/experiment.hpp"
#include "csmacap/hnf.hpp"
#include "csmacap/highway.hpp"
#include "csmacap/instances.hpp"
#include "csmacap/json_io.hpp"
#include "csmacap/rng.hpp"

namespace fs = std::filesystem;
using namespace csmacap;

namespace {

struct Globals {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out = "capcli_out";
    unsigned jobs = 1;
};

ExperimentConfig load(const Globals& g) {
    ExperimentConfig cfg = g.config_path.empty() ? ExperimentConfig{} : load_experiment(g.config_path);
    if (cfg.verify.checks.empty() && g.config_path.empty()) {
        cfg.verify.checks = verify_check_ids();
    }
    if (g.seed) {
        cfg.seed = *g.seed;
    }
    return cfg;
}

fs::path out_file(const Globals& g, const std::string& name) {
    std::error_code ec;
    fs::create_directories(g.out, ec);
    if (ec) {
        throw ConfigError("cannot create output directory " + g.out + ": " + ec.message());
    }
    return fs::path(g.out) / name;
}

void write_json(const Globals& g, const std::string& name, const json& j) {
    const fs::path p = out_file(g, name);
    std::ofstream os(p);
    if (!os) {
        throw ConfigError("cannot write " + p.string());
    }
    os << j.dump(2) << '\n';
}

std::ofstream open_out(const Globals& g, const std::string& name) {
    const fs::path p = out_file(g, name);
    std::ofstream os(p);
    if (!os) {
        throw ConfigError("cannot write " + p.string());
    }
    return os;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

// ---------------------------------------------------------------- gen

struct GenArgs {
    std::optional<std::int64_t> n;
    bool highways = false;
};

int cmd_gen(const Globals& g, const GenArgs& a) {
    const ExperimentConfig cfg = load(g);
    const std::int64_t n = a.n.value_or(cfg.sweep.n.front());
    if (n < 2) {
        throw ConfigError("gen: n must be at least 2");
    }
    const NodeSet nodes = generate_network(n, derive_seed(cfg.seed, 0x4E7 ^ (static_cast<std::uint64_t>(n) << 20)),
                                           cfg.sweep.count);
    const SourceSinkPairs pairs =
        sample_pairs(nodes, derive_seed(cfg.seed, 0x9A1 ^ (static_cast<std::uint64_t>(n) << 20)), cfg.sweep.traffic);
    write_json(g, "network.json", to_json(nodes, &pairs));
    std::cout << "nodes " << nodes.nodes.size() << " side " << format_double(nodes.side_length) << '\n';
    if (a.highways) {
        HighwaySystem hs = build_highways(nodes, build_grid(nodes, cfg.sweep.highway.c1), cfg.sweep.highway);
        associate_peripherals(hs);
        const RoutePlan plan = plan_routes(pairs, hs);
        write_json(g, "highways.json", to_json(hs));
        write_json(g, "routes.json", to_json(plan));
        std::cout << "paths " << hs.paths.size() << " retries " << hs.retries << " links " << plan.links.size()
                  << " max backbone load " << plan.max_load(LinkClass::Backbone) << '\n';
    }
    return kExitOk;
}

// ------------------------------------------------------------- verify

struct VerifyArgs {
    std::vector<std::string> checks;
    bool strip = false;
    std::optional<std::size_t> instances;
};

int cmd_verify(const Globals& g, const VerifyArgs& a) {
    ExperimentConfig cfg = load(g);
    if (!a.checks.empty()) {
        cfg.verify.checks = a.checks;
    }
    if (a.strip) {
        cfg.verify.strip_margins = true;
    }
    if (a.instances) {
        cfg.verify.instances = *a.instances;
        cfg.verify.certify_instances = *a.instances;
    }
    const VerifyReport report = run_verify(cfg.verify, cfg.radio, cfg.seed);
    write_json(g, "verify.json", to_json(report));
    for (const std::string& w : report.warnings) {
        std::cerr << "warning: " << w << '\n';
    }
    for (const CheckOutcome& c : report.checks) {
        std::cout << (c.violations == 0 ? "ok   " : "FAIL ") << c.id << "  instances=" << c.instances
                  << " comparisons=" << c.inclusions << " violations=" << c.violations;
        if (c.counterexample) {
            std::cout << " counterexample=" << c.counterexample->to_string();
        }
        std::cout << '\n';
        std::cerr << c.id << ": " << c.seconds << " s\n";
    }
    return report.passed() ? kExitOk : kExitViolation;
}

// ---------------------------------------------------------------- hnf

struct HnfArgs {
    std::string spec_path;
    std::string model;
    std::optional<double> r_tx;
};

void print_audit(std::ostream& os, const HnfCondition& c) {
    os << "target " << model_label(c.target) << ", formula " << c.formula_id << '\n';
    for (const auto& [k, v] : c.inputs) {
        os << "  " << k << " = " << format_double(v) << '\n';
    }
    os << "inclusion chain (sensing family first):\n";
    for (std::size_t i = 0; i < c.chain.size(); ++i) {
        os << "  " << i + 1 << ". " << c.chain[i] << '\n';
    }
    os << "required r_cs = " << format_double(c.r_cs_required) << '\n';
    if (!c.alternative_chain.empty()) {
        os << "alternative chain gives r_cs = " << format_double(c.chain_alternative) << ":\n";
        for (std::size_t i = 0; i < c.alternative_chain.size(); ++i) {
            os << "  " << i + 1 << ". " << c.alternative_chain[i] << '\n';
        }
    }
    if (!c.diagnostic.empty()) {
        os << "diagnostic: " << c.diagnostic << '\n';
    }
}

int cmd_hnf(const Globals& g, const HnfArgs& a) {
    const ExperimentConfig cfg = load(g);
    RadioConfig radio = cfg.radio;
    FamilySpec spec{Model::B1, {}};
    if (!a.spec_path.empty()) {
        json j = read_json_file(a.spec_path);
        if (j.is_object() && j.contains("radio")) {
            radio = radio_from_json(j.at("radio"), radio);
            j.erase("radio");
        }
        spec = family_spec_from_json(j);
    }
    if (!a.model.empty()) {
        try {
            spec.model = parse_model(a.model);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    if (a.r_tx) {
        spec.params.r_tx = *a.r_tx;
    }
    HnfCondition cond;
    try {
        cond = required_cs_range(spec, radio);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const json j = to_json(cond);
    write_json(g, "hnf.json", j);
    std::cout << j.dump(2) << '\n';
    print_audit(std::cerr, cond);
    return std::isfinite(cond.r_cs_required) ? kExitOk : kExitConfig;
}

// --------------------------------------------------------- throughput

struct ThroughputArgs {
    std::optional<std::size_t> instances;
    std::optional<std::uint64_t> events;
};

int cmd_throughput(const Globals& g, const ThroughputArgs& a) {
    ExperimentConfig cfg = load(g);
    if (a.instances) {
        cfg.throughput.instances = *a.instances;
    }
    if (a.events) {
        cfg.throughput.events = *a.events;
    }
    const auto t0 = std::chrono::steady_clock::now();
    ThroughputReport report;
    try {
        report = run_throughput(cfg.throughput, cfg.radio, cfg.seed);
    } catch (const std::length_error& e) {
        throw ConfigError(std::string("throughput: ") + e.what());
    }
    write_json(g, "throughput.json", to_json(report));
    double worst_tv = 0.0;
    double worst_fit = 0.0;
    for (const ThroughputInstance& i : report.instances) {
        worst_tv = std::max(worst_tv, i.total_variation);
        worst_fit = std::max(worst_fit, i.fit_shortfall);
    }
    std::cout << "instances " << report.instances.size() << " max_tv " << format_double(worst_tv)
              << " max_fit_shortfall " << format_double(worst_fit) << '\n';
    std::cerr << "runtime " << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()
              << " s\n";
    return report.passed() ? kExitOk : kExitViolation;
}

// -------------------------------------------------------------- sweep

struct SweepArgs {
    std::vector<std::int64_t> n;
    std::optional<std::size_t> seeds;
    std::vector<std::string> modes;
};

int cmd_sweep(const Globals& g, const SweepArgs& a) {
    ExperimentConfig cfg = load(g);
    if (!a.n.empty()) {
        cfg.sweep.n = a.n;
    }
    if (a.seeds) {
        cfg.sweep.seeds = *a.seeds;
    }
    if (!a.modes.empty()) {
        cfg.sweep.modes.clear();
        for (const std::string& m : a.modes) {
            try {
                cfg.sweep.modes.push_back(parse_sensing(m));
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
        }
    }
    const auto t0 = std::chrono::steady_clock::now();
    const SweepResult result = run_sweep(cfg.sweep, cfg.radio, g.jobs);
    {
        std::ofstream csv = open_out(g, "sweep.csv");
        write_sweep_csv(csv, result);
    }
    write_json(g, "sweep.json", to_json(result));

    std::size_t ok = 0;
    for (const SweepRow& r : result.rows) {
        ok += r.ok() ? 1 : 0;
    }
    for (const ModeSummary& s : result.summaries) {
        std::cout << sensing_label(s.mode) << ": slope " << format_double(s.slope) << '\n';
        for (std::size_t k = 0; k < s.n.size(); ++k) {
            std::cout << "  n=" << s.n[k] << " ok=" << s.ok_rows[k]
                      << " median_rate_sqrt_n=" << format_double(s.median_rate_sqrt_n[k])
                      << " median_rate_sqrt_nlogn=" << format_double(s.median_rate_sqrt_nlogn[k])
                      << " backbone_bottleneck=" << format_double(s.bottleneck_backbone_share[k]) << '\n';
        }
    }
    std::cerr << "rows " << result.rows.size() << " ok " << ok << " runtime "
              << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s\n";
    return ok == 0 ? kExitConstruction : kExitOk;
}

// --------------------------------------------------------------- ipcs

struct IpcsArgs {
    std::string links_path;
    std::size_t count = 5;
    std::string target = "b.1";
    std::optional<double> r_cs;
    std::uint64_t events = 100000;
    double nu = 1.0;
    bool trace = false;
};

int cmd_ipcs(const Globals& g, const IpcsArgs& a) {
    const ExperimentConfig cfg = load(g);
    std::vector<Link> links;
    if (!a.links_path.empty()) {
        links = links_from_json(read_json_file(a.links_path));
    } else {
        Rng rng(derive_seed(cfg.seed, 0x1C5));
        LinkBoxParams p;
        p.count = a.count;
        p.side = cfg.throughput.box_side;
        links = random_links(rng, p);
    }
    if (links.empty() || links.size() > 64) {
        throw ConfigError("ipcs: need between 1 and 64 links");
    }
    FamilySpec target;
    try {
        target.model = parse_model(a.target);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    target.params.r_tx = max_link_length(links);
    double r_cs = 0.0;
    if (a.r_cs) {
        r_cs = *a.r_cs;
    } else {
        const HnfCondition cond = required_cs_range(target, cfg.radio);
        if (!std::isfinite(cond.r_cs_required)) {
            throw ConfigError("ipcs: " + cond.diagnostic);
        }
        r_cs = cond.r_cs_required;
    }
    FamilySpec sensing{Model::C1, {}};
    sensing.params.r_cs = r_cs;
    const FeasibilityEvaluator in_sensing(links, sensing, cfg.radio);
    const FeasibilityEvaluator in_target(links, target, cfg.radio);

    std::uint64_t outside_sensing = 0;
    std::uint64_t outside_target = 0;
    std::optional<FeasibleState> witness;
    SimOptions opts;
    opts.events = a.events;
    opts.seed = derive_seed(cfg.seed, 0x1C6);
    opts.record_events = a.trace;
    opts.observer = [&](std::span<const std::uint32_t> s) {
        const bool ok_s = in_sensing.feasible(s);
        const bool ok_t = in_target.feasible(s);
        outside_sensing += ok_s ? 0 : 1;
        outside_target += ok_t ? 0 : 1;
        if ((!ok_s || !ok_t) && !witness) {
            witness = FeasibleState(std::vector<std::uint32_t>(s.begin(), s.end()));
        }
    };
    const BackoffRates rates{std::vector<double>(links.size(), a.nu)};
    const SimTrace trace = simulate_ipcs(links, r_cs, cfg.radio, rates, opts);

    json j{{"links", links.size()},
           {"target", a.target},
           {"r_cs", r_cs},
           {"events", trace.event_count},
           {"outside_sensing_family", outside_sensing},
           {"outside_target_family", outside_target}};
    if (witness) {
        j["witness"] = witness->to_string();
    }
    if (links.size() <= 20) {
        const Family fam = enumerate_family(links, sensing, cfg.radio);
        const double tv = total_variation(stationary(fam, rates), trace.occupancy());
        j["tv_vs_stationary"] = tv;
    }
    write_json(g, "ipcs.json", j);
    if (a.trace) {
        std::ofstream nd = open_out(g, "ipcs_trace.ndjson");
        write_trace_ndjson(nd, trace);
        std::ofstream occ = open_out(g, "ipcs_occupancy.csv");
        write_occupancy_csv(occ, trace.occupancy());
    }
    std::cout << j.dump() << '\n';
    return outside_sensing == 0 && outside_target == 0 ? kExitOk : kExitViolation;
}

template <typename F>
int guarded(F&& f) {
    try {
        return f();
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ConstructionError& e) {
        std::cerr << "construction failed: " << e.what() << '\n';
        return kExitConstruction;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Carrier-sensing capacity toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--config", g.config_path, "JSON experiment config")->check(CLI::ExistingFile);
    app.add_option("--seed", g.seed, "Experiment seed (overrides the config)");
    app.add_option("--out", g.out, "Output directory")->capture_default_str();
    app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

    int code = kExitOk;

    GenArgs gen;
    auto* sc_gen = app.add_subcommand("gen", "Generate a network, pairs and optionally highways");
    sc_gen->add_option("--n", gen.n, "Expected node count");
    sc_gen->add_flag("--highways", gen.highways, "Also build highways, association and routes");
    sc_gen->callback([&] { code = guarded([&] { return cmd_gen(g, gen); }); });

    VerifyArgs ver;
    auto* sc_ver = app.add_subcommand("verify", "Randomized inclusion and certification suite");
    sc_ver->add_option("--checks", ver.checks, "Check ids (default: all)")->delimiter(',');
    sc_ver->add_flag("--strip-margins", ver.strip, "Drop every sufficient margin");
    sc_ver->add_option("--instances", ver.instances, "Instances per check");
    sc_ver->callback([&] { code = guarded([&] { return cmd_verify(g, ver); }); });

    HnfArgs hnf;
    auto* sc_hnf = app.add_subcommand("hnf", "Required sensing range for a target model");
    sc_hnf->add_option("--spec", hnf.spec_path, "Family spec JSON, optionally with a \"radio\" object")
        ->check(CLI::ExistingFile);
    sc_hnf->add_option("--model", hnf.model, "Target model b.0 .. b.3");
    sc_hnf->add_option("--r-tx", hnf.r_tx, "Longest link length");
    sc_hnf->callback([&] { code = guarded([&] { return cmd_hnf(g, hnf); }); });

    ThroughputArgs thr;
    auto* sc_thr = app.add_subcommand("throughput", "Simulation against the stationary law, and rate fitting");
    sc_thr->add_option("--instances", thr.instances, "Random instances");
    sc_thr->add_option("--events", thr.events, "Simulated events per instance");
    sc_thr->callback([&] { code = guarded([&] { return cmd_throughput(g, thr); }); });

    SweepArgs sw;
    auto* sc_sw = app.add_subcommand("sweep", "Capacity sweep over n, seeds and sensing modes");
    sc_sw->add_option("--n", sw.n, "Node counts")->delimiter(',');
    sc_sw->add_option("--seeds", sw.seeds, "Seeds per n");
    sc_sw->add_option("--modes", sw.modes, "single, dual-full, dual-half")->delimiter(',');
    sc_sw->callback([&] { code = guarded([&] { return cmd_sweep(g, sw); }); });

    IpcsArgs ip;
    auto* sc_ip = app.add_subcommand("ipcs", "Incremental-power carrier sensing simulation");
    sc_ip->add_option("--links", ip.links_path, "Links JSON; random links when absent")->check(CLI::ExistingFile);
    sc_ip->add_option("--count", ip.count, "Random link count")->capture_default_str();
    sc_ip->add_option("--target", ip.target, "Target bidirectional model")->capture_default_str();
    sc_ip->add_option("--r-cs", ip.r_cs, "Sensing range (default: required range for the target)");
    sc_ip->add_option("--events", ip.events, "Simulated events")->capture_default_str();
    sc_ip->add_option("--nu", ip.nu, "Backoff rate of every link")->check(CLI::PositiveNumber)->capture_default_str();
    sc_ip->add_flag("--trace", ip.trace, "Write the event trace and occupancy");
    sc_ip->callback([&] { code = guarded([&] { return cmd_ipcs(g, ip); }); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }
    return code;
}
