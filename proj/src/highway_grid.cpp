// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "csmacap/highway.hpp"
#include "csmacap/kernels.hpp"

namespace csmacap {

namespace {

/// Unit-capacity max-flow by shortest augmenting paths.
class UnitFlow {
public:
    explicit UnitFlow(std::size_t vertices) : head_(vertices, -1) {}

    void add_edge(std::size_t u, std::size_t v) {
        edges_.push_back({v, 1, head_[u]});
        head_[u] = static_cast<std::int64_t>(edges_.size() - 1);
        edges_.push_back({u, 0, head_[v]});
        head_[v] = static_cast<std::int64_t>(edges_.size() - 1);
    }

    std::size_t run(std::size_t s, std::size_t t) {
        std::size_t flow = 0;
        std::vector<std::int64_t> via(head_.size());
        while (true) {
            std::fill(via.begin(), via.end(), -1);
            std::deque<std::size_t> queue{s};
            via[s] = -2;
            while (!queue.empty() && via[t] == -1) {
                const std::size_t u = queue.front();
                queue.pop_front();
                for (std::int64_t e = head_[u]; e >= 0; e = edges_[e].next) {
                    const Edge& ed = edges_[e];
                    if (ed.cap > 0 && via[ed.to] == -1) {
                        via[ed.to] = e;
                        queue.push_back(ed.to);
                    }
                }
            }
            if (via[t] == -1) {
                return flow;
            }
            for (std::size_t v = t; v != s;) {
                const std::int64_t e = via[v];
                edges_[e].cap -= 1;
                edges_[e ^ 1].cap += 1;
                v = edges_[e ^ 1].to;
            }
            ++flow;
        }
    }

    std::vector<std::size_t> saturated_heads(std::size_t u) const {
        std::vector<std::size_t> out;
        for (std::int64_t e = head_[u]; e >= 0; e = edges_[e].next) {
            if ((e & 1) == 0 && edges_[e].cap == 0) {
                out.push_back(edges_[e].to);
            }
        }
        return out;
    }

    /// Head of the saturated forward edge leaving u, if any.
    std::int64_t used_out(std::size_t u, std::size_t skip) const {
        for (std::int64_t e = head_[u]; e >= 0; e = edges_[e].next) {
            if ((e & 1) == 0 && edges_[e].cap == 0 && edges_[e].to != skip) {
                return static_cast<std::int64_t>(edges_[e].to);
            }
        }
        return -1;
    }

private:
    struct Edge {
        std::size_t to;
        int cap;
        std::int64_t next;
    };
    std::vector<Edge> edges_;
    std::vector<std::int64_t> head_;
};

/// Crossing paths through one slab. `cell_at(a, b)` maps along-slab
/// coordinate a and across-slab coordinate b to a cell index.
template <typename CellAt>
std::vector<std::vector<std::size_t>> slab_paths(const CellGrid& grid, std::size_t lo, std::size_t hi,
                                                 CellAt cell_at) {
    const std::size_t g = grid.cells_per_side;
    const std::size_t width = hi - lo;
    // Vertex ids: 2*(a*width + b) is the in-copy, +1 the out-copy.
    const std::size_t cells = g * width;
    const std::size_t source = 2 * cells;
    const std::size_t sink = source + 1;
    UnitFlow flow(sink + 1);
    auto id = [&](std::size_t a, std::size_t b) { return a * width + (b - lo); };
    for (std::size_t a = 0; a < g; ++a) {
        for (std::size_t b = lo; b < hi; ++b) {
            if (!grid.occupied(cell_at(a, b))) {
                continue;
            }
            const std::size_t v = id(a, b);
            flow.add_edge(2 * v, 2 * v + 1);
            if (a == 0) {
                flow.add_edge(source, 2 * v);
            }
            if (a + 1 == g) {
                flow.add_edge(2 * v + 1, sink);
            }
            const auto link = [&](std::size_t a2, std::size_t b2) {
                if (grid.occupied(cell_at(a2, b2))) {
                    flow.add_edge(2 * v + 1, 2 * id(a2, b2));
                }
            };
            if (a + 1 < g) link(a + 1, b);
            if (a > 0) link(a - 1, b);
            if (b + 1 < hi) link(a, b + 1);
            if (b > lo) link(a, b - 1);
        }
    }
    const std::size_t count = flow.run(source, sink);
    std::vector<std::vector<std::size_t>> out;
    out.reserve(count);
    std::vector<std::size_t> starts;
    for (std::size_t in_copy : flow.saturated_heads(source)) {
        starts.push_back(in_copy / 2);
    }
    std::sort(starts.begin(), starts.end());
    for (std::size_t start : starts) {
        std::vector<std::size_t> path;
        std::size_t v = start;
        while (true) {
            path.push_back(cell_at(v / width, v % width + lo));
            const std::int64_t next = flow.used_out(2 * v + 1, SIZE_MAX);
            if (next < 0 || static_cast<std::size_t>(next) == sink) {
                break;
            }
            v = static_cast<std::size_t>(next) / 2;
        }
        out.push_back(std::move(path));
    }
    return out;
}

std::vector<std::size_t> slab_bounds(std::size_t g, std::size_t height) {
    const std::size_t count = std::max<std::size_t>(1, g / std::max<std::size_t>(1, height));
    std::vector<std::size_t> bounds;
    for (std::size_t k = 0; k <= count; ++k) {
        bounds.push_back(k * g / count);
    }
    return bounds;
}

double log_n(const CellGrid& grid) {
    const double n = grid.side_length * grid.side_length;
    return std::log(std::max(n, 2.0));
}

std::size_t representative(const CellGrid& grid, std::size_t cell) {
    const auto& ids = grid.members[cell];
    std::vector<double> xs(ids.size()), ys(ids.size());
    for (std::size_t k = 0; k < ids.size(); ++k) {
        xs[k] = grid.nodes[ids[k]].x;
        ys[k] = grid.nodes[ids[k]].y;
    }
    const Point c = grid.center(cell);
    const kernels::Nearest hit = kernels::active().nearest(c.x, c.y, xs.data(), ys.data(), ids.size());
    return ids[hit.index];
}

HighwaySystem try_build(const CellGrid& grid, const HighwayConstants& constants, std::string& failure) {
    HighwaySystem hs;
    hs.grid = grid;
    hs.constants = constants;
    hs.nominal_n = grid.side_length * grid.side_length;
    const std::size_t g = grid.cells_per_side;
    const double h = std::ceil(constants.slab_c2 * log_n(grid) / grid.cell_side);
    hs.slab_height = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(h, 1.0)), 1, g);
    const auto bounds = slab_bounds(g, hs.slab_height);

    for (int dir = 0; dir < 2; ++dir) {
        const bool horizontal = dir == 0;
        for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
            std::vector<std::vector<std::size_t>> found;
            if (horizontal) {
                found = slab_paths(grid, bounds[s], bounds[s + 1], [g](std::size_t a, std::size_t b) { return b * g + a; });
            } else {
                found = slab_paths(grid, bounds[s], bounds[s + 1], [g](std::size_t a, std::size_t b) { return a * g + b; });
            }
            if (found.empty()) {
                std::ostringstream os;
                os << (horizontal ? "horizontal" : "vertical") << " slab " << s << " (cells " << bounds[s] << ".."
                   << bounds[s + 1] - 1 << ") has no crossing at c1 = " << grid.cell_side << "; try a larger c1";
                failure = os.str();
                return hs;
            }
            for (auto& cells : found) {
                hs.paths.push_back({horizontal, s, std::move(cells)});
            }
        }
    }

    const std::size_t cells = grid.cell_count();
    hs.cell_rep.assign(cells, -1);
    hs.cell_hpath.assign(cells, -1);
    hs.cell_vpath.assign(cells, -1);
    hs.cell_hpos.assign(cells, -1);
    hs.cell_vpos.assign(cells, -1);
    hs.is_backbone.assign(grid.nodes.size(), 0);
    for (std::size_t p = 0; p < hs.paths.size(); ++p) {
        const HighwayPath& path = hs.paths[p];
        for (std::size_t k = 0; k < path.cells.size(); ++k) {
            const std::size_t c = path.cells[k];
            auto& slot = path.horizontal ? hs.cell_hpath[c] : hs.cell_vpath[c];
            auto& pos = path.horizontal ? hs.cell_hpos[c] : hs.cell_vpos[c];
            slot = static_cast<std::int32_t>(p);
            pos = static_cast<std::int32_t>(k);
            if (hs.cell_rep[c] < 0) {
                const std::size_t r = representative(grid, c);
                hs.cell_rep[c] = static_cast<std::int64_t>(r);
                hs.is_backbone[r] = 1;
            }
        }
    }
    failure.clear();
    return hs;
}

}  // namespace

std::size_t CellGrid::cell_of(Point p) const {
    auto clamp_index = [&](double v) {
        const double k = std::floor(v / cell_side);
        if (k <= 0.0) {
            return std::size_t{0};
        }
        return std::min(cells_per_side - 1, static_cast<std::size_t>(k));
    };
    return clamp_index(p.y) * cells_per_side + clamp_index(p.x);
}

Point CellGrid::center(std::size_t cell) const {
    const double x0 = static_cast<double>(col(cell)) * cell_side;
    const double y0 = static_cast<double>(row(cell)) * cell_side;
    const double x1 = std::min(side_length, x0 + cell_side);
    const double y1 = std::min(side_length, y0 + cell_side);
    return {0.5 * (x0 + x1), 0.5 * (y0 + y1)};
}

CellGrid build_grid(const NodeSet& nodes, double c1) {
    if (!(c1 > 0.0) || !std::isfinite(c1)) {
        throw std::invalid_argument("build_grid: cell side must be positive");
    }
    CellGrid grid;
    grid.cell_side = c1;
    grid.side_length = nodes.side_length;
    const double per_side = std::ceil(nodes.side_length / c1 - 1e-9);
    grid.cells_per_side = static_cast<std::size_t>(std::max(1.0, per_side));
    grid.members.assign(grid.cells_per_side * grid.cells_per_side, {});
    grid.nodes = nodes.nodes;
    for (std::uint32_t i = 0; i < nodes.nodes.size(); ++i) {
        grid.members[grid.cell_of(nodes.nodes[i])].push_back(i);
    }
    return grid;
}

void mask_grid(CellGrid& grid, const std::vector<bool>& keep) {
    if (keep.size() != grid.cell_count()) {
        throw std::invalid_argument("mask_grid: mask size does not match the cell count");
    }
    for (std::size_t c = 0; c < keep.size(); ++c) {
        if (!keep[c]) {
            grid.members[c].clear();
        }
    }
}

HighwaySystem build_highways(const NodeSet& nodes, const CellGrid& grid, const HighwayConstants& constants) {
    if (!(constants.slab_c2 > 0.0) || !(constants.assoc_c2 > 0.0)) {
        throw std::invalid_argument("build_highways: highway constants must be positive");
    }
    HighwayConstants used = constants;
    used.c1 = grid.cell_side;
    CellGrid current = grid;
    std::string failure;
    for (int attempt = 0;; ++attempt) {
        HighwaySystem hs = try_build(current, used, failure);
        if (failure.empty()) {
            hs.retries = attempt;
            return hs;
        }
        if (attempt >= constants.max_retries) {
            throw ConstructionError("percolation failure: " + failure);
        }
        used.c1 *= 2.0;
        current = build_grid(nodes, used.c1);
    }
}

void associate_peripherals(HighwaySystem& hs) {
    const CellGrid& grid = hs.grid;
    const double ln = log_n(grid);
    hs.assoc_range = hs.constants.assoc_c2 * ln;
    hs.load_cap = hs.constants.load_cap.value_or(
        static_cast<std::size_t>(std::ceil(4.0 * hs.constants.c1 * hs.constants.assoc_c2 * ln)));
    if (hs.load_cap == 0) {
        throw std::invalid_argument("associate_peripherals: load cap must be positive");
    }
    const std::size_t n = grid.nodes.size();
    hs.association.assign(n, -1);
    std::vector<std::size_t> load(n, 0);
    for (std::uint32_t u = 0; u < n; ++u) {
        if (hs.is_backbone[u]) {
            hs.association[u] = u;
        }
    }
    const std::size_t g = grid.cells_per_side;
    const auto reach = static_cast<std::int64_t>(std::ceil(hs.assoc_range / grid.cell_side));
    const double r2 = hs.assoc_range * hs.assoc_range * (1.0 + 1e-12);
    std::vector<double> xs, ys, d2;
    std::vector<std::uint32_t> ids;
    std::vector<std::size_t> order;
    for (std::uint32_t u = 0; u < n; ++u) {
        if (hs.is_backbone[u]) {
            continue;
        }
        const Point p = grid.nodes[u];
        const std::size_t home = grid.cell_of(p);
        const auto c0 = static_cast<std::int64_t>(grid.col(home));
        const auto r0 = static_cast<std::int64_t>(grid.row(home));
        xs.clear();
        ys.clear();
        ids.clear();
        for (std::int64_t r = std::max<std::int64_t>(0, r0 - reach);
             r <= std::min<std::int64_t>(static_cast<std::int64_t>(g) - 1, r0 + reach); ++r) {
            for (std::int64_t c = std::max<std::int64_t>(0, c0 - reach);
                 c <= std::min<std::int64_t>(static_cast<std::int64_t>(g) - 1, c0 + reach); ++c) {
                const std::int64_t rep = hs.cell_rep[static_cast<std::size_t>(r) * g + static_cast<std::size_t>(c)];
                if (rep >= 0) {
                    xs.push_back(grid.nodes[rep].x);
                    ys.push_back(grid.nodes[rep].y);
                    ids.push_back(static_cast<std::uint32_t>(rep));
                }
            }
        }
        d2.resize(ids.size());
        kernels::active().sq_dist(p.x, p.y, xs.data(), ys.data(), ids.size(), d2.data());
        order.clear();
        for (std::size_t k = 0; k < ids.size(); ++k) {
            if (d2[k] <= r2) {
                order.push_back(k);
            }
        }
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return d2[a] != d2[b] ? d2[a] < d2[b] : ids[a] < ids[b];
        });
        bool placed = false;
        for (std::size_t k : order) {
            if (load[ids[k]] < hs.load_cap) {
                ++load[ids[k]];
                hs.association[u] = ids[k];
                placed = true;
                break;
            }
        }
        if (!placed) {
            std::ostringstream os;
            os << "association failure: node " << u << " at (" << p.x << ", " << p.y
               << ") has no backbone node with spare capacity within " << hs.assoc_range << "; try a larger c2";
            throw ConstructionError(os.str());
        }
    }
}

}  // namespace csmacap
