// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "csmacap/highway.hpp"

namespace csmacap {

namespace {

/// One link per reuse square per slot, colours in turn. With weights, a
/// link appears in its square's cycle once per unit of relay load.
Schedule reuse_stage(const RoutePlan& plan, LinkClass cls, double r_cs, int k, bool weighted) {
    const double side = r_cs / static_cast<double>(k - 1);
    std::map<std::pair<std::int64_t, std::int64_t>, std::vector<std::uint32_t>> squares;
    for (std::uint32_t l = 0; l < plan.links.size(); ++l) {
        if (plan.links[l].cls != cls) {
            continue;
        }
        const Point t = plan.links[l].tx;
        auto& cycle = squares[{static_cast<std::int64_t>(std::floor(t.x / side)),
                               static_cast<std::int64_t>(std::floor(t.y / side))}];
        const auto copies = weighted ? static_cast<std::size_t>(std::max(1.0, std::ceil(plan.load[l] - 1e-9))) : 1;
        cycle.insert(cycle.end(), copies, l);
    }
    const auto kk = static_cast<std::int64_t>(k);
    std::vector<std::vector<const std::vector<std::uint32_t>*>> colours(static_cast<std::size_t>(kk * kk));
    for (const auto& [key, members] : squares) {
        const std::int64_t colour = ((key.second % kk + kk) % kk) * kk + (key.first % kk + kk) % kk;
        colours[static_cast<std::size_t>(colour)].push_back(&members);
    }
    Schedule out;
    out.link_count = plan.links.size();
    for (const auto& group : colours) {
        std::size_t block = 0;
        for (const auto* members : group) {
            block = std::max(block, members->size());
        }
        for (std::size_t s = 0; s < block; ++s) {
            std::vector<std::uint32_t> state;
            state.reserve(group.size());
            for (const auto* members : group) {
                state.push_back((*members)[s % members->size()]);
            }
            out.states.emplace_back(std::move(state));
        }
    }
    return out;
}

bool shares_node(const RoutePlan& plan, std::span<const std::uint32_t> state) {
    std::vector<std::uint32_t> nodes;
    nodes.reserve(2 * state.size());
    for (std::uint32_t l : state) {
        nodes.push_back(plan.link_tx[l]);
        nodes.push_back(plan.link_rx[l]);
    }
    std::sort(nodes.begin(), nodes.end());
    return std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end();
}

void certify_stage(const Schedule& stage, const RoutePlan& plan, const FeasibilityEvaluator& eval, bool half_duplex,
                   const char* name) {
    for (std::size_t t = 0; t < stage.states.size(); ++t) {
        const auto members = stage.states[t].members();
        const bool ok = eval.feasible(members) && !(half_duplex && shares_node(plan, members));
        if (!ok) {
            std::ostringstream os;
            os << name << " slot " << t << " state " << stage.states[t].to_string() << " is not in "
               << model_label(eval.spec().model) << (half_duplex ? " (half duplex)" : "")
               << "; the reuse constants are too aggressive";
            throw ConstructionError(os.str());
        }
    }
}

}  // namespace

std::string_view sensing_label(SensingMode m) {
    switch (m) {
        case SensingMode::SingleFull:
            return "single";
        case SensingMode::DualFull:
            return "dual-full";
        case SensingMode::DualHalf:
            return "dual-half";
    }
    return "?";
}

SensingMode parse_sensing(std::string_view label) {
    for (SensingMode m : {SensingMode::SingleFull, SensingMode::DualFull, SensingMode::DualHalf}) {
        if (sensing_label(m) == label) {
            return m;
        }
    }
    throw std::invalid_argument("unknown sensing mode: " + std::string(label));
}

double peripheral_beta(double beta, double r_tx_backbone, double hop, double alpha, double floor) {
    if (!(hop > r_tx_backbone)) {
        return beta;
    }
    const double relaxed = beta * std::pow(r_tx_backbone / hop, alpha);
    return std::min(beta, std::max(floor, relaxed));
}

FamilySpec certification_spec(const RoutePlan& plan, const ScheduleSettings& settings) {
    FamilySpec spec = settings.target;
    if (!spec.params.r_tx) {
        spec.params.r_tx = std::max(plan.backbone_hop_bound, plan.peripheral_hop_bound);
    }
    const double beta = spec.params.beta.value_or(settings.cfg.beta);
    spec.params.per_link_beta.resize(plan.links.size());
    for (std::size_t l = 0; l < plan.links.size(); ++l) {
        spec.params.per_link_beta[l] =
            plan.links[l].cls == LinkClass::Peripheral
                ? peripheral_beta(beta, plan.backbone_hop_bound, plan.links[l].length(), settings.cfg.alpha,
                                  settings.beta_floor)
                : beta;
    }
    return spec;
}

TwoStageSchedule two_stage_schedule(const RoutePlan& plan, const ScheduleSettings& settings) {
    if (settings.reuse < 2) {
        throw std::invalid_argument("two_stage_schedule: reuse factor must be at least 2");
    }
    if (!(settings.r_cs_backbone > 0.0) || !(settings.r_cs_peripheral > 0.0) ||
        !std::isfinite(settings.r_cs_backbone) || !std::isfinite(settings.r_cs_peripheral)) {
        throw ConstructionError("two_stage_schedule: sensing ranges must be positive and finite");
    }
    TwoStageSchedule out;
    out.peripheral = reuse_stage(plan, LinkClass::Peripheral, settings.r_cs_peripheral, settings.reuse, settings.weight_by_load);
    out.backbone = reuse_stage(plan, LinkClass::Backbone, settings.r_cs_backbone, settings.reuse, settings.weight_by_load);
    if (settings.certify) {
        const FamilySpec spec = certification_spec(plan, settings);
        const FeasibilityEvaluator eval(plan.links, spec, settings.cfg);
        certify_stage(out.peripheral, plan, eval, settings.half_duplex, "peripheral");
        certify_stage(out.backbone, plan, eval, settings.half_duplex, "backbone");
        out.certified_states = out.peripheral.states.size() + out.backbone.states.size();
    }
    return out;
}

FlowRate min_flow_rate(const RoutePlan& plan, std::vector<double> airtime) {
    if (airtime.size() != plan.links.size()) {
        throw std::invalid_argument("min_flow_rate: airtime count does not match the link count");
    }
    FlowRate out;
    out.rate = plan.routes.empty() ? 0.0 : std::numeric_limits<double>::infinity();
    out.pair_rate.reserve(plan.routes.size());
    for (const auto& route : plan.routes) {
        double best = std::numeric_limits<double>::infinity();
        std::int64_t arg = -1;
        for (std::uint32_t l : route) {
            const double r = plan.load[l] > 0.0 ? airtime[l] / plan.load[l] : std::numeric_limits<double>::infinity();
            if (r < best) {
                best = r;
                arg = l;
            }
        }
        out.pair_rate.push_back(best);
        if (best < out.rate) {
            out.rate = best;
            out.bottleneck_link = arg;
        }
    }
    if (out.bottleneck_link >= 0) {
        out.bottleneck_class = plan.links[static_cast<std::size_t>(out.bottleneck_link)].cls;
    }
    out.airtime = std::move(airtime);
    return out;
}

FlowRate min_flow_rate(const RoutePlan& plan, const TwoStageSchedule& schedules, SensingMode mode,
                       double stage_share) {
    if (!(stage_share > 0.0) || !(stage_share < 1.0)) {
        throw std::invalid_argument("min_flow_rate: stage share must lie in (0, 1)");
    }
    const std::vector<double> c_p = schedules.peripheral.states.empty() ? std::vector<double>(plan.links.size(), 0.0)
                                                                         : tdma_throughput(schedules.peripheral);
    const std::vector<double> c_b = schedules.backbone.states.empty() ? std::vector<double>(plan.links.size(), 0.0)
                                                                       : tdma_throughput(schedules.backbone);
    // Full-duplex dual sensing runs both stages at once on separate channels.
    const bool concurrent = mode == SensingMode::DualFull;
    std::vector<double> airtime(plan.links.size(), 0.0);
    for (std::size_t l = 0; l < plan.links.size(); ++l) {
        if (plan.links[l].cls == LinkClass::Peripheral) {
            airtime[l] = (concurrent ? 1.0 : stage_share) * c_p[l];
        } else {
            airtime[l] = (concurrent ? 1.0 : 1.0 - stage_share) * c_b[l];
        }
    }
    return min_flow_rate(plan, std::move(airtime));
}

}  // namespace csmacap
