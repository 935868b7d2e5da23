// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#include "csmacap/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <ostream>

namespace csmacap {

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
    if (!j.is_object()) {
        throw ConfigError(std::string(where) + ": expected an object");
    }
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) {
            ok = ok || key == a;
        }
        if (!ok) {
            throw ConfigError(std::string(where) + ": unknown key \"" + key + "\"");
        }
    }
}

template <typename T>
void read(const json& j, const char* key, T& out, const char* where) {
    if (!j.contains(key)) {
        return;
    }
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string(where) + "." + key + ": " + e.what());
    }
}

template <typename T>
void read_opt(const json& j, const char* key, std::optional<T>& out, const char* where) {
    if (!j.contains(key) || j.at(key).is_null()) {
        return;
    }
    T v{};
    read(j, key, v, where);
    out = v;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json double_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string traffic_label(TrafficModel t) { return t == TrafficModel::Permutation ? "permutation" : "uniform"; }

std::string count_label(NodeCount c) { return c == NodeCount::Exact ? "exact" : "poisson"; }

}  // namespace

double round12(double v) {
    if (!std::isfinite(v)) {
        return v;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ------------------------------------------------------------ spatial

json to_json(const NodeSet& nodes, const SourceSinkPairs* pairs) {
    json j;
    j["side_length"] = round12(nodes.side_length);
    j["seed"] = nodes.seed;
    json pts = json::array();
    for (const Point& p : nodes.nodes) {
        pts.push_back({round12(p.x), round12(p.y)});
    }
    j["nodes"] = std::move(pts);
    json pr = json::array();
    if (pairs != nullptr) {
        for (const auto& [s, d] : pairs->pairs) {
            pr.push_back({s, d});
        }
    }
    j["pairs"] = std::move(pr);
    return j;
}

NodeSet node_set_from_json(const json& j) {
    NodeSet ns;
    try {
        ns.side_length = j.at("side_length").get<double>();
        ns.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& p : j.at("nodes")) {
            ns.nodes.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("node set: ") + e.what());
    }
    return ns;
}

SourceSinkPairs pairs_from_json(const json& j) {
    SourceSinkPairs out;
    try {
        for (const auto& p : j.at("pairs")) {
            out.pairs.emplace_back(p.at(0).get<std::uint32_t>(), p.at(1).get<std::uint32_t>());
            out.rates.push_back(1.0);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("pairs: ") + e.what());
    }
    return out;
}

// -------------------------------------------------------- feasibility

json to_json(const RadioConfig& cfg) {
    return json{{"p_tx", cfg.p_tx}, {"n0", cfg.n0},       {"alpha", cfg.alpha}, {"beta", cfg.beta}, {"delta", cfg.delta},
                {"r_tx", cfg.r_tx}, {"r_xcl", cfg.r_xcl}, {"r_cs", cfg.r_cs},   {"t_cs", cfg.t_cs}};
}

RadioConfig radio_from_json(const json& j, RadioConfig base) {
    const char* w = "radio";
    check_keys(j, {"p_tx", "n0", "alpha", "beta", "delta", "r_tx", "r_xcl", "r_cs", "t_cs"}, w);
    read(j, "p_tx", base.p_tx, w);
    read(j, "n0", base.n0, w);
    read(j, "alpha", base.alpha, w);
    read(j, "beta", base.beta, w);
    read(j, "delta", base.delta, w);
    read(j, "r_tx", base.r_tx, w);
    read(j, "r_xcl", base.r_xcl, w);
    read(j, "r_cs", base.r_cs, w);
    read(j, "t_cs", base.t_cs, w);
    try {
        base.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return base;
}

json to_json(const FamilySpec& spec) {
    const FamilyParams& p = spec.params;
    json params;
    params["r_xcl"] = optional_number(p.r_xcl);
    params["r_tx"] = optional_number(p.r_tx);
    params["delta"] = optional_number(p.delta);
    params["beta"] = optional_number(p.beta);
    params["r_cs"] = optional_number(p.r_cs);
    params["t_cs"] = optional_number(p.t_cs);
    params["r_cs_backbone"] = optional_number(p.r_cs_backbone);
    params["r_cs_peripheral"] = optional_number(p.r_cs_peripheral);
    params["beta_backbone"] = optional_number(p.beta_backbone);
    params["beta_peripheral"] = optional_number(p.beta_peripheral);
    params["per_link_beta"] = p.per_link_beta;
    params["sharp_b3"] = p.sharp_b3;
    return json{{"model", std::string(model_label(spec.model))}, {"params", params}};
}

FamilySpec family_spec_from_json(const json& j) {
    const char* w = "family";
    check_keys(j, {"model", "params"}, w);
    FamilySpec spec;
    try {
        spec.model = parse_model(j.at("model").get<std::string>());
    } catch (const std::exception& e) {
        throw ConfigError(std::string("family.model: ") + e.what());
    }
    if (!j.contains("params")) {
        return spec;
    }
    const json& p = j.at("params");
    const char* wp = "family.params";
    check_keys(p,
               {"r_xcl", "r_tx", "delta", "beta", "r_cs", "t_cs", "r_cs_backbone", "r_cs_peripheral", "beta_backbone",
                "beta_peripheral", "per_link_beta", "sharp_b3"},
               wp);
    FamilyParams& fp = spec.params;
    read_opt(p, "r_xcl", fp.r_xcl, wp);
    read_opt(p, "r_tx", fp.r_tx, wp);
    read_opt(p, "delta", fp.delta, wp);
    read_opt(p, "beta", fp.beta, wp);
    read_opt(p, "r_cs", fp.r_cs, wp);
    read_opt(p, "t_cs", fp.t_cs, wp);
    read_opt(p, "r_cs_backbone", fp.r_cs_backbone, wp);
    read_opt(p, "r_cs_peripheral", fp.r_cs_peripheral, wp);
    read_opt(p, "beta_backbone", fp.beta_backbone, wp);
    read_opt(p, "beta_peripheral", fp.beta_peripheral, wp);
    read(p, "per_link_beta", fp.per_link_beta, wp);
    read(p, "sharp_b3", fp.sharp_b3, wp);
    return spec;
}

json to_json(const HnfCondition& cond) {
    json inputs;
    for (const auto& [k, v] : cond.inputs) {
        inputs[k] = v;
    }
    json j{{"target", std::string(model_label(cond.target))},
           {"r_cs_required", double_or_null(cond.r_cs_required)},
           {"formula_id", cond.formula_id},
           {"inputs", inputs},
           {"chain", cond.chain},
           {"chain_alternative", double_or_null(cond.chain_alternative)},
           {"alternative_chain", cond.alternative_chain}};
    if (!cond.diagnostic.empty()) {
        j["diagnostic"] = cond.diagnostic;
    }
    return j;
}

json to_json(std::span<const Link> links) {
    json arr = json::array();
    for (const Link& l : links) {
        json o{{"tx", {l.tx.x, l.tx.y}}, {"rx", {l.rx.x, l.rx.y}}};
        if (l.cls != LinkClass::Unassigned) {
            o["class"] = std::string(link_class_label(l.cls));
        }
        arr.push_back(std::move(o));
    }
    return arr;
}

std::vector<Link> links_from_json(const json& j) {
    std::vector<Link> out;
    try {
        for (const auto& o : j) {
            Link l;
            l.tx = {o.at("tx").at(0).get<double>(), o.at("tx").at(1).get<double>()};
            l.rx = {o.at("rx").at(0).get<double>(), o.at("rx").at(1).get<double>()};
            if (o.contains("class")) {
                const std::string c = o.at("class").get<std::string>();
                if (c == link_class_label(LinkClass::Backbone)) {
                    l.cls = LinkClass::Backbone;
                } else if (c == link_class_label(LinkClass::Peripheral)) {
                    l.cls = LinkClass::Peripheral;
                } else {
                    throw ConfigError("links: unknown class \"" + c + "\"");
                }
            }
            out.push_back(l);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("links: ") + e.what());
    }
    return out;
}

// ------------------------------------------------------------ highway

json to_json(const HighwaySystem& hs) {
    json paths = json::array();
    for (const HighwayPath& p : hs.paths) {
        paths.push_back({{"horizontal", p.horizontal}, {"slab", p.slab}, {"cells", p.cells}});
    }
    json reps = json::object();
    for (std::size_t c = 0; c < hs.cell_rep.size(); ++c) {
        if (hs.cell_rep[c] >= 0) {
            reps[std::to_string(c)] = hs.cell_rep[c];
        }
    }
    return json{{"cell_side", hs.grid.cell_side},
                {"cells_per_side", hs.grid.cells_per_side},
                {"side_length", hs.grid.side_length},
                {"constants",
                 {{"c1", hs.constants.c1},
                  {"slab_c2", hs.constants.slab_c2},
                  {"assoc_c2", hs.constants.assoc_c2},
                  {"max_retries", hs.constants.max_retries}}},
                {"retries", hs.retries},
                {"slab_height", hs.slab_height},
                {"assoc_range", hs.assoc_range},
                {"load_cap", hs.load_cap},
                {"paths", paths},
                {"representatives", reps},
                {"association", hs.association}};
}

json to_json(const RoutePlan& plan) {
    json links = json::array();
    for (std::size_t l = 0; l < plan.links.size(); ++l) {
        links.push_back({{"tx", plan.link_tx[l]},
                         {"rx", plan.link_rx[l]},
                         {"class", std::string(link_class_label(plan.links[l].cls))},
                         {"length", plan.links[l].length()},
                         {"load", plan.load[l]}});
    }
    return json{{"backbone_hop_bound", plan.backbone_hop_bound},
                {"peripheral_hop_bound", plan.peripheral_hop_bound},
                {"max_backbone_load", plan.max_load(LinkClass::Backbone)},
                {"max_peripheral_load", plan.max_load(LinkClass::Peripheral)},
                {"links", links},
                {"routes", plan.routes}};
}

// --------------------------------------------------------------- csma

void write_trace_ndjson(std::ostream& os, const SimTrace& trace) {
    for (const SimEvent& e : trace.events) {
        os << "{\"t\":" << format_double(e.t) << ",\"link\":" << e.link
           << ",\"ev\":\"" << (e.kind == EventKind::Start ? "start" : "end") << "\"}\n";
    }
}

void write_occupancy_csv(std::ostream& os, const std::map<LinkMask, double>& occupancy) {
    os << "state,probability\n";
    for (const auto& [s, p] : occupancy) {
        os << '"' << FeasibleState::from_mask(s).to_string() << "\"," << format_double(p) << '\n';
    }
}

// ------------------------------------------------------- experiments

ExperimentConfig experiment_from_json(const json& j) {
    ExperimentConfig cfg;
    check_keys(j, {"seed", "radio", "verify", "throughput", "sweep"}, "config");
    read(j, "seed", cfg.seed, "config");
    if (j.contains("radio")) {
        cfg.radio = radio_from_json(j.at("radio"));
    }
    cfg.verify.checks = verify_check_ids();
    if (j.contains("verify")) {
        const json& v = j.at("verify");
        const char* w = "verify";
        check_keys(v, {"checks", "instances", "max_links", "certify_instances", "certify_links", "strip_margins"}, w);
        if (v.contains("checks") && !(v.at("checks").is_string() && v.at("checks").get<std::string>() == "all")) {
            read(v, "checks", cfg.verify.checks, w);
        }
        read(v, "instances", cfg.verify.instances, w);
        read(v, "max_links", cfg.verify.max_links, w);
        read(v, "certify_instances", cfg.verify.certify_instances, w);
        read(v, "certify_links", cfg.verify.certify_links, w);
        read(v, "strip_margins", cfg.verify.strip_margins, w);
    }
    if (j.contains("throughput")) {
        const json& t = j.at("throughput");
        const char* w = "throughput";
        check_keys(t,
                   {"instances", "links", "events", "nu_min", "nu_max", "box_side", "r_cs", "fit_tol", "schedule_slots"},
                   w);
        ThroughputConfig& tc = cfg.throughput;
        read(t, "instances", tc.instances, w);
        read(t, "links", tc.links, w);
        read(t, "events", tc.events, w);
        read(t, "nu_min", tc.nu_min, w);
        read(t, "nu_max", tc.nu_max, w);
        read(t, "box_side", tc.box_side, w);
        read(t, "r_cs", tc.r_cs, w);
        read(t, "fit_tol", tc.fit_tol, w);
        read(t, "schedule_slots", tc.schedule_slots, w);
    }
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        const char* w = "sweep";
        check_keys(s,
                   {"n", "seeds", "first_seed", "modes", "target", "highway", "reuse", "stage_share", "beta_floor",
                    "weight_by_load", "hop_bounds", "certify", "traffic", "node_count"},
                   w);
        SweepConfig& sc = cfg.sweep;
        read(s, "n", sc.n, w);
        read(s, "seeds", sc.seeds, w);
        read(s, "first_seed", sc.first_seed, w);
        read(s, "reuse", sc.reuse, w);
        read(s, "stage_share", sc.stage_share, w);
        read(s, "beta_floor", sc.beta_floor, w);
        read(s, "certify", sc.certify, w);
        read(s, "weight_by_load", sc.weight_by_load, w);
        try {
            if (s.contains("modes")) {
                sc.modes.clear();
                for (const auto& m : s.at("modes")) {
                    sc.modes.push_back(parse_sensing(m.get<std::string>()));
                }
            }
            if (s.contains("target")) {
                sc.target = parse_model(s.at("target").get<std::string>());
                if (sc.target != Model::B0 && sc.target != Model::B1 && sc.target != Model::B2 &&
                    sc.target != Model::B3) {
                    throw ConfigError("sweep.target must be one of b.0, b.1, b.2, b.3");
                }
            }
            if (s.contains("hop_bounds")) {
                const std::string h = s.at("hop_bounds").get<std::string>();
                if (h != "realized" && h != "nominal") {
                    throw ConfigError("sweep.hop_bounds must be \"realized\" or \"nominal\"");
                }
                sc.hop_bounds = h == "nominal" ? HopBounds::Nominal : HopBounds::Realized;
            }
            if (s.contains("traffic")) {
                const std::string t = s.at("traffic").get<std::string>();
                if (t != "uniform" && t != "permutation") {
                    throw ConfigError("sweep.traffic must be \"uniform\" or \"permutation\"");
                }
                sc.traffic = t == "permutation" ? TrafficModel::Permutation : TrafficModel::UniformSink;
            }
            if (s.contains("node_count")) {
                const std::string c = s.at("node_count").get<std::string>();
                if (c != "poisson" && c != "exact") {
                    throw ConfigError("sweep.node_count must be \"poisson\" or \"exact\"");
                }
                sc.count = c == "exact" ? NodeCount::Exact : NodeCount::Poisson;
            }
        } catch (const json::exception& e) {
            throw ConfigError(std::string("sweep: ") + e.what());
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("sweep: ") + e.what());
        }
        if (s.contains("highway")) {
            const json& h = s.at("highway");
            const char* wh = "sweep.highway";
            check_keys(h, {"c1", "slab_c2", "assoc_c2", "load_cap", "max_retries"}, wh);
            read(h, "c1", sc.highway.c1, wh);
            read(h, "slab_c2", sc.highway.slab_c2, wh);
            read(h, "assoc_c2", sc.highway.assoc_c2, wh);
            read_opt(h, "load_cap", sc.highway.load_cap, wh);
            read(h, "max_retries", sc.highway.max_retries, wh);
        }
        if (!(sc.highway.c1 > 0.0) || !(sc.highway.slab_c2 > 0.0) || !(sc.highway.assoc_c2 > 0.0) ||
            sc.highway.max_retries < 0) {
            throw ConfigError("sweep.highway: constants must be positive");
        }
        if (!(sc.stage_share > 0.0 && sc.stage_share < 1.0)) {
            throw ConfigError("sweep.stage_share must lie in (0, 1)");
        }
        if (sc.reuse < 2) {
            throw ConfigError("sweep.reuse must be at least 2");
        }
    }
    return cfg;
}

json to_json(const ExperimentConfig& cfg) {
    const SweepConfig& s = cfg.sweep;
    json modes = json::array();
    for (SensingMode m : s.modes) {
        modes.push_back(std::string(sensing_label(m)));
    }
    json highway{{"c1", s.highway.c1},
                 {"slab_c2", s.highway.slab_c2},
                 {"assoc_c2", s.highway.assoc_c2},
                 {"load_cap", s.highway.load_cap ? json(*s.highway.load_cap) : json(nullptr)},
                 {"max_retries", s.highway.max_retries}};
    return json{{"seed", cfg.seed},
                {"radio", to_json(cfg.radio)},
                {"verify",
                 {{"checks", cfg.verify.checks},
                  {"instances", cfg.verify.instances},
                  {"max_links", cfg.verify.max_links},
                  {"certify_instances", cfg.verify.certify_instances},
                  {"certify_links", cfg.verify.certify_links},
                  {"strip_margins", cfg.verify.strip_margins}}},
                {"throughput",
                 {{"instances", cfg.throughput.instances},
                  {"links", cfg.throughput.links},
                  {"events", cfg.throughput.events},
                  {"nu_min", cfg.throughput.nu_min},
                  {"nu_max", cfg.throughput.nu_max},
                  {"box_side", cfg.throughput.box_side},
                  {"r_cs", cfg.throughput.r_cs},
                  {"fit_tol", cfg.throughput.fit_tol},
                  {"schedule_slots", cfg.throughput.schedule_slots}}},
                {"sweep",
                 {{"n", s.n},
                  {"seeds", s.seeds},
                  {"first_seed", s.first_seed},
                  {"modes", modes},
                  {"target", std::string(model_label(s.target))},
                  {"highway", highway},
                  {"reuse", s.reuse},
                  {"stage_share", s.stage_share},
                  {"beta_floor", s.beta_floor},
                  {"weight_by_load", s.weight_by_load},
                  {"hop_bounds", s.hop_bounds == HopBounds::Nominal ? "nominal" : "realized"},
                  {"certify", s.certify},
                  {"traffic", traffic_label(s.traffic)},
                  {"node_count", count_label(s.count)}}}};
}

ExperimentConfig load_experiment(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file " + path);
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
    return experiment_from_json(j);
}

json to_json(const VerifyReport& report) {
    json checks = json::array();
    for (const CheckOutcome& c : report.checks) {
        json o{{"id", c.id},
               {"statement", c.statement},
               {"instances", c.instances},
               {"inclusions", c.inclusions},
               {"violations", c.violations},
               {"seconds", c.seconds}};
        if (c.counterexample) {
            const auto m = c.counterexample->members();
            o["counterexample"] = std::vector<std::uint32_t>(m.begin(), m.end());
            o["counterexample_links"] = to_json(std::span<const Link>(c.counterexample_links));
        }
        checks.push_back(std::move(o));
    }
    return json{{"passed", report.passed()}, {"warnings", report.warnings}, {"checks", checks}};
}

json to_json(const ThroughputReport& report) {
    json inst = json::array();
    for (const ThroughputInstance& i : report.instances) {
        inst.push_back({{"family_size", i.family_size},
                        {"total_variation", i.total_variation},
                        {"fit_shortfall", i.fit_shortfall},
                        {"fit_iterations", i.fit_iterations},
                        {"nu", i.nu},
                        {"targets", i.targets},
                        {"achieved", i.achieved}});
    }
    return json{{"passed", report.passed()},
                {"tv_limit", report.tv_limit},
                {"fit_tol", report.fit_tol},
                {"instances", inst}};
}

json to_json(const SweepResult& result) {
    json rows = json::array();
    for (const SweepRow& r : result.rows) {
        rows.push_back({{"n", r.n},
                        {"seed", r.seed},
                        {"mode", std::string(sensing_label(r.mode))},
                        {"method", r.method},
                        {"status", r.status},
                        {"node_count", r.node_count},
                        {"min_flow_rate", double_or_null(r.rate)},
                        {"rate_sqrt_n", double_or_null(r.rate_sqrt_n())},
                        {"rate_sqrt_nlogn", double_or_null(r.rate_sqrt_nlogn())},
                        {"max_relay_load", r.max_relay_load},
                        {"bottleneck_class", std::string(link_class_label(r.bottleneck))},
                        {"percolation_retries", r.retries},
                        {"r_cs_backbone", r.r_cs_backbone},
                        {"r_cs_peripheral", r.r_cs_peripheral}});
    }
    json summaries = json::array();
    for (const ModeSummary& s : result.summaries) {
        json per_n = json::array();
        for (std::size_t k = 0; k < s.n.size(); ++k) {
            per_n.push_back({{"n", s.n[k]},
                             {"ok_rows", s.ok_rows[k]},
                             {"median_rate", double_or_null(s.median_rate[k])},
                             {"median_rate_sqrt_n", double_or_null(s.median_rate_sqrt_n[k])},
                             {"median_rate_sqrt_nlogn", double_or_null(s.median_rate_sqrt_nlogn[k])},
                             {"bottleneck_backbone_share", double_or_null(s.bottleneck_backbone_share[k])}});
        }
        summaries.push_back(
            {{"mode", std::string(sensing_label(s.mode))}, {"slope", double_or_null(s.slope)}, {"per_n", per_n}});
    }
    return json{{"rows", rows}, {"summaries", summaries}};
}

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
    os << "n,seed,mode,method,status,min_flow_rate,rate_sqrt_n,rate_sqrt_nlogn,max_relay_load,bottleneck_class,"
          "percolation_retries\n";
    for (const SweepRow& r : result.rows) {
        os << r.n << ',' << r.seed << ',' << sensing_label(r.mode) << ',' << r.method << ',' << r.status << ','
           << format_double(r.rate) << ',' << format_double(r.rate_sqrt_n()) << ','
           << format_double(r.rate_sqrt_nlogn()) << ',' << format_double(r.max_relay_load) << ','
           << link_class_label(r.bottleneck) << ',' << r.retries << '\n';
    }
}

}  // namespace csmacap
