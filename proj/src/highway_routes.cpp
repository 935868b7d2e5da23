// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#include <algorithm>
#include <cstdlib>
#include <map>
#include <unordered_map>

#include "csmacap/highway.hpp"

namespace csmacap {

namespace {

class RouteBuilder {
public:
    RouteBuilder(const HighwaySystem& hs, RoutePlan& plan) : hs_(hs), plan_(plan) {
        for (std::size_t c = 0; c < hs.cell_rep.size(); ++c) {
            if (hs.cell_hpath[c] >= 0 && hs.cell_vpath[c] >= 0) {
                crossings_[{hs.cell_hpath[c], hs.cell_vpath[c]}].push_back(c);
            }
        }
    }

    std::uint32_t link(std::uint32_t tx, std::uint32_t rx, LinkClass cls) {
        const std::uint64_t key = (static_cast<std::uint64_t>(tx) << 32) | rx;
        const auto it = index_.find(key);
        if (it != index_.end()) {
            return it->second;
        }
        const auto id = static_cast<std::uint32_t>(plan_.links.size());
        plan_.links.push_back({hs_.grid.nodes[tx], hs_.grid.nodes[rx], cls});
        plan_.link_tx.push_back(tx);
        plan_.link_rx.push_back(rx);
        plan_.load.push_back(0.0);
        index_.emplace(key, id);
        return id;
    }

    /// Backbone hops from cell a to cell b along one path.
    void along(std::int32_t path, std::size_t a, std::size_t b, std::vector<std::uint32_t>& out) {
        const HighwayPath& p = hs_.paths[static_cast<std::size_t>(path)];
        const auto& pos = p.horizontal ? hs_.cell_hpos : hs_.cell_vpos;
        std::int64_t i = pos[a];
        const std::int64_t j = pos[b];
        const std::int64_t step = i < j ? 1 : -1;
        for (; i != j; i += step) {
            const std::size_t from = p.cells[static_cast<std::size_t>(i)];
            const std::size_t to = p.cells[static_cast<std::size_t>(i + step)];
            out.push_back(link(static_cast<std::uint32_t>(hs_.cell_rep[from]), static_cast<std::uint32_t>(hs_.cell_rep[to]),
                               LinkClass::Backbone));
        }
    }

    /// Cell on `path` nearest (by path position) to `from` that also lies on
    /// a path of the other orientation.
    std::size_t nearest_junction(std::int32_t path, std::size_t from) const {
        const HighwayPath& p = hs_.paths[static_cast<std::size_t>(path)];
        const auto& pos = p.horizontal ? hs_.cell_hpos : hs_.cell_vpos;
        const auto& other = p.horizontal ? hs_.cell_vpath : hs_.cell_hpath;
        const std::int64_t origin = pos[from];
        std::size_t best = from;
        std::int64_t best_gap = -1;
        for (std::size_t k = 0; k < p.cells.size(); ++k) {
            if (other[p.cells[k]] < 0) {
                continue;
            }
            const std::int64_t gap = std::llabs(static_cast<std::int64_t>(k) - origin);
            if (best_gap < 0 || gap < best_gap) {
                best_gap = gap;
                best = p.cells[k];
            }
        }
        return best;
    }

    void backbone(std::size_t a, std::size_t b, std::vector<std::uint32_t>& out) {
        if (a == b) {
            return;
        }
        if (hs_.cell_hpath[a] >= 0 && hs_.cell_hpath[a] == hs_.cell_hpath[b]) {
            along(hs_.cell_hpath[a], a, b, out);
            return;
        }
        if (hs_.cell_vpath[a] >= 0 && hs_.cell_vpath[a] == hs_.cell_vpath[b]) {
            along(hs_.cell_vpath[a], a, b, out);
            return;
        }
        std::size_t cur = a;
        if (hs_.cell_hpath[cur] < 0) {
            const std::size_t j = nearest_junction(hs_.cell_vpath[cur], cur);
            along(hs_.cell_vpath[cur], cur, j, out);
            cur = j;
        }
        std::size_t end = b;
        std::int32_t tail_path = -1;
        if (hs_.cell_vpath[end] < 0) {
            tail_path = hs_.cell_hpath[end];
            end = nearest_junction(tail_path, b);
        }
        const std::int32_t h = hs_.cell_hpath[cur];
        const std::int32_t v = hs_.cell_vpath[end];
        // Any left-right crossing meets any top-bottom crossing.
        const auto& shared = crossings_.at({h, v});
        std::size_t x = shared.front();
        std::int64_t best = -1;
        for (std::size_t c : shared) {
            const std::int64_t cost = std::llabs(static_cast<std::int64_t>(hs_.cell_hpos[c]) - hs_.cell_hpos[cur]) +
                                      std::llabs(static_cast<std::int64_t>(hs_.cell_vpos[c]) - hs_.cell_vpos[end]);
            if (best < 0 || cost < best) {
                best = cost;
                x = c;
            }
        }
        along(h, cur, x, out);
        along(v, x, end, out);
        if (tail_path >= 0) {
            along(tail_path, end, b, out);
        }
    }

private:
    const HighwaySystem& hs_;
    RoutePlan& plan_;
    std::unordered_map<std::uint64_t, std::uint32_t> index_;
    std::map<std::pair<std::int32_t, std::int32_t>, std::vector<std::size_t>> crossings_;
};

}  // namespace

double RoutePlan::max_load(LinkClass cls) const {
    double best = 0.0;
    for (std::size_t i = 0; i < links.size(); ++i) {
        if (links[i].cls == cls) {
            best = std::max(best, load[i]);
        }
    }
    return best;
}

RoutePlan plan_routes(const SourceSinkPairs& pairs, const HighwaySystem& hs) {
    if (!hs.associated()) {
        throw std::invalid_argument("plan_routes: peripheral association missing");
    }
    RoutePlan plan;
    plan.pairs = pairs.pairs;
    RouteBuilder builder(hs, plan);
    const std::size_t n = hs.grid.nodes.size();
    plan.routes.reserve(pairs.pairs.size());
    for (std::size_t k = 0; k < pairs.pairs.size(); ++k) {
        const auto [s, d] = pairs.pairs[k];
        if (s >= n || d >= n || s == d) {
            throw std::invalid_argument("plan_routes: invalid source-sink pair");
        }
        const auto a = static_cast<std::uint32_t>(hs.association[s]);
        const auto b = static_cast<std::uint32_t>(hs.association[d]);
        std::vector<std::uint32_t> route;
        if (a != s) {
            route.push_back(builder.link(s, a, LinkClass::Peripheral));
        }
        builder.backbone(hs.grid.cell_of(hs.grid.nodes[a]), hs.grid.cell_of(hs.grid.nodes[b]), route);
        if (b != d) {
            route.push_back(builder.link(b, d, LinkClass::Peripheral));
        }
        const double demand = k < pairs.rates.size() ? pairs.rates[k] : 1.0;
        for (std::uint32_t l : route) {
            plan.load[l] += demand;
        }
        plan.routes.push_back(std::move(route));
    }
    // Sensing ranges are sized from the realized hops; the nominal bounds
    // stand in for a class with no links.
    double bb = 0.0;
    double pp = 0.0;
    for (const Link& l : plan.links) {
        double& m = l.cls == LinkClass::Backbone ? bb : pp;
        m = std::max(m, l.length());
    }
    plan.backbone_hop_bound = bb > 0.0 ? bb : hs.backbone_hop_bound();
    plan.peripheral_hop_bound = pp > 0.0 ? pp : plan.backbone_hop_bound;
    return plan;
}

}  // namespace csmacap
