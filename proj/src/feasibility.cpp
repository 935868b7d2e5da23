// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#include "csmacap/feasibility.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "csmacap/kernels.hpp"

namespace csmacap {

namespace {

constexpr std::array<std::string_view, 13> kLabels = {"a.0", "a.1", "a.2", "a.3", "b.0", "b.1", "b.2",
                                                      "b.3", "c.1", "c.2", "d.1", "d.2", "e.1"};

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string("radio config: ") + what + " must be positive and finite");
    }
}

bool bidirectional(Model m) { return m == Model::B0 || m == Model::B1 || m == Model::B2 || m == Model::B3; }

}  // namespace

void RadioConfig::validate() const {
    if (!(alpha > 2.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("radio config: path-loss exponent must exceed 2");
    }
    require_positive(p_tx, "p_tx");
    if (!(n0 >= 0.0) || !std::isfinite(n0)) {
        throw std::invalid_argument("radio config: n0 must be non-negative and finite");
    }
    require_positive(beta, "beta");
    require_positive(delta, "delta");
    require_positive(r_tx, "r_tx");
    require_positive(r_xcl, "r_xcl");
    require_positive(r_cs, "r_cs");
    require_positive(t_cs, "t_cs");
}

std::string_view model_label(Model m) { return kLabels.at(static_cast<std::size_t>(m)); }

Model parse_model(std::string_view label) {
    for (std::size_t i = 0; i < kLabels.size(); ++i) {
        if (kLabels[i] == label) {
            return static_cast<Model>(i);
        }
    }
    throw std::invalid_argument("unknown feasibility model: " + std::string(label));
}

bool is_pairwise(Model m) {
    switch (m) {
        case Model::A3:
        case Model::B3:
        case Model::C2:
        case Model::E1:
            return false;
        default:
            return true;
    }
}

bool is_dual(Model m) { return m == Model::D1 || m == Model::D2 || m == Model::E1; }

// ---------------------------------------------------------------- state

FeasibleState::FeasibleState(std::vector<std::uint32_t> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
        throw std::invalid_argument("FeasibleState: duplicate link index");
    }
}

FeasibleState FeasibleState::from_mask(LinkMask mask) {
    FeasibleState s;
    for (std::uint32_t i = 0; mask != 0; ++i, mask >>= 1) {
        if (mask & 1U) {
            s.members_.push_back(i);
        }
    }
    return s;
}

bool FeasibleState::contains(std::uint32_t i) const { return std::binary_search(members_.begin(), members_.end(), i); }

LinkMask FeasibleState::mask() const {
    LinkMask m = 0;
    for (std::uint32_t i : members_) {
        if (i >= 64) {
            throw std::out_of_range("FeasibleState::mask: index exceeds 63");
        }
        m |= LinkMask{1} << i;
    }
    return m;
}

std::string FeasibleState::to_string() const {
    std::ostringstream os;
    os << '{';
    for (std::size_t k = 0; k < members_.size(); ++k) {
        os << (k ? "," : "") << members_[k];
    }
    os << '}';
    return os.str();
}

std::strong_ordering operator<=>(const FeasibleState& a, const FeasibleState& b) {
    if (a.size() != b.size()) {
        return a.size() <=> b.size();
    }
    return std::lexicographical_compare_three_way(a.members_.begin(), a.members_.end(), b.members_.begin(),
                                                  b.members_.end());
}

// ------------------------------------------------------------ evaluator

FeasibilityEvaluator::FeasibilityEvaluator(std::span<const Link> links, const FamilySpec& spec,
                                           const RadioConfig& cfg)
    : links_(links), spec_(spec), cfg_(cfg) {
    cfg_.validate();
    const FamilyParams& p = spec_.params;
    r_xcl_ = p.r_xcl.value_or(cfg_.r_xcl);
    r_tx_ = p.r_tx.value_or(cfg_.r_tx);
    delta_ = p.delta.value_or(cfg_.delta);
    beta_ = p.beta.value_or(cfg_.beta);
    r_cs_ = p.r_cs.value_or(cfg_.r_cs);
    t_cs_ = p.t_cs.value_or(cfg_.t_cs);
    r_cs_b_ = p.r_cs_backbone.value_or(r_cs_);
    r_cs_p_ = p.r_cs_peripheral.value_or(r_cs_);
    beta_b_ = p.beta_backbone.value_or(beta_);
    beta_p_ = p.beta_peripheral.value_or(beta_);
    for (double v : {r_xcl_, r_tx_, delta_, beta_, r_cs_, t_cs_, r_cs_b_, r_cs_p_, beta_b_, beta_p_}) {
        require_positive(v, "family parameter");
    }
    if (!p.per_link_beta.empty()) {
        if (p.per_link_beta.size() != links_.size()) {
            throw std::invalid_argument("per-link beta list does not match the link count");
        }
        for (double b : p.per_link_beta) {
            require_positive(b, "per-link beta");
        }
    }
    if (is_dual(spec_.model)) {
        for (const Link& l : links_) {
            if (l.cls == LinkClass::Unassigned) {
                throw std::invalid_argument("dual-sensing model needs every link classified");
            }
        }
    }
}

double FeasibilityEvaluator::beta_of(std::uint32_t i) const {
    if (!spec_.params.per_link_beta.empty()) {
        return spec_.params.per_link_beta[i];
    }
    if (is_dual(spec_.model)) {
        return links_[i].cls == LinkClass::Backbone ? beta_b_ : beta_p_;
    }
    return beta_;
}

double FeasibilityEvaluator::range_of(std::uint32_t i) const {
    return links_[i].cls == LinkClass::Backbone ? r_cs_b_ : r_cs_p_;
}

double FeasibilityEvaluator::power_at(double d) const { return cfg_.p_tx * std::pow(d, -cfg_.alpha); }

bool FeasibilityEvaluator::singleton_feasible(std::uint32_t i) const {
    const Link& l = links_[i];
    switch (spec_.model) {
        case Model::A0:
        case Model::B0:
            return at_most(l.length(), r_tx_);
        case Model::A3:
        case Model::B3:
        case Model::E1:
            return at_least(power_at(l.length()), beta_of(i) * cfg_.n0);
        case Model::C2:
            return at_most(cfg_.n0, t_cs_);
        default:
            return true;
    }
}

bool FeasibilityEvaluator::pair_ok(std::uint32_t i, std::uint32_t j) const {
    const Link& li = links_[i];
    const Link& lj = links_[j];
    const Model m = spec_.model;
    const double d_ji = bidirectional(m) ? link_gap(li, lj) : distance(lj.tx, li.rx);
    switch (m) {
        case Model::A0:
        case Model::B0:
            return at_least(d_ji, r_xcl_);
        case Model::A1:
        case Model::B1:
            return at_least(d_ji, (1.0 + delta_) * li.length());
        case Model::A2:
        case Model::B2:
            return at_least(power_at(li.length()), beta_of(i) * (cfg_.n0 + power_at(d_ji)));
        case Model::C1:
            return at_least(distance(lj.tx, li.tx), r_cs_);
        case Model::D1:
            if (li.cls != lj.cls) {
                return true;
            }
            return at_least(distance(lj.tx, li.tx), range_of(i));
        case Model::D2:
            return at_least(distance(lj.tx, li.tx), std::max(range_of(i), range_of(j)));
        default:
            throw std::logic_error("pair_ok on an aggregate model");
    }
}

bool FeasibilityEvaluator::pair_feasible(std::uint32_t i, std::uint32_t j) const {
    if (!is_pairwise(spec_.model)) {
        throw std::invalid_argument("pair_feasible needs a pairwise model");
    }
    if (i >= links_.size() || j >= links_.size()) {
        throw std::out_of_range("link index out of range");
    }
    if (i == j) {
        return singleton_feasible(i);
    }
    return singleton_feasible(i) && singleton_feasible(j) && pair_ok(i, j) && pair_ok(j, i);
}

bool FeasibilityEvaluator::node_disjoint(std::span<const std::uint32_t> state) const {
    for (std::size_t a = 0; a < state.size(); ++a) {
        const Link& la = links_[state[a]];
        for (std::size_t b = a + 1; b < state.size(); ++b) {
            const Link& lb = links_[state[b]];
            if (same_point(la.tx, lb.tx) || same_point(la.tx, lb.rx) || same_point(la.rx, lb.tx) ||
                same_point(la.rx, lb.rx)) {
                return false;
            }
        }
    }
    return true;
}

bool FeasibilityEvaluator::aggregate_ok(std::span<const std::uint32_t> state) const {
    const Model m = spec_.model;
    if (m == Model::C2) {
        return admission_order(state).has_value();
    }
    if (m == Model::E1 && !node_disjoint(state)) {
        return false;
    }
    for (std::uint32_t i : state) {
        const Link& li = links_[i];
        double interference = 0.0;
        if (m == Model::B3 && spec_.params.sharp_b3) {
            double at_tx = 0.0;
            double at_rx = 0.0;
            for (std::uint32_t j : state) {
                if (j == i) {
                    continue;
                }
                const Link& lj = links_[j];
                at_tx += power_at(std::min(distance(lj.tx, li.tx), distance(lj.rx, li.tx)));
                at_rx += power_at(std::min(distance(lj.tx, li.rx), distance(lj.rx, li.rx)));
            }
            interference = std::min(at_tx, at_rx);
        } else {
            for (std::uint32_t j : state) {
                if (j == i) {
                    continue;
                }
                const Link& lj = links_[j];
                if (m == Model::E1 && lj.cls != li.cls) {
                    continue;
                }
                const double d = (m == Model::A3) ? distance(lj.tx, li.rx) : link_gap(li, lj);
                interference += power_at(d);
            }
        }
        if (!at_least(power_at(li.length()), beta_of(i) * (cfg_.n0 + interference))) {
            return false;
        }
    }
    return true;
}

bool FeasibilityEvaluator::feasible(std::span<const std::uint32_t> state) const {
    for (std::uint32_t i : state) {
        if (i >= links_.size()) {
            throw std::out_of_range("link index out of range");
        }
    }
    for (std::uint32_t i : state) {
        if (!singleton_feasible(i)) {
            return false;
        }
    }
    if (is_pairwise(spec_.model)) {
        for (std::size_t a = 0; a < state.size(); ++a) {
            for (std::size_t b = 0; b < state.size(); ++b) {
                if (a != b && !pair_ok(state[a], state[b])) {
                    return false;
                }
            }
        }
        return true;
    }
    return aggregate_ok(state);
}

bool FeasibilityEvaluator::extends(std::span<const std::uint32_t> base, std::uint32_t i) const {
    if (i >= links_.size()) {
        throw std::out_of_range("link index out of range");
    }
    if (!singleton_feasible(i)) {
        return false;
    }
    if (is_pairwise(spec_.model)) {
        for (std::uint32_t j : base) {
            if (j == i || !pair_ok(i, j) || !pair_ok(j, i)) {
                return false;
            }
        }
        return true;
    }
    std::vector<std::uint32_t> grown(base.begin(), base.end());
    grown.push_back(i);
    return aggregate_ok(grown);
}

std::optional<std::vector<std::uint32_t>> FeasibilityEvaluator::admission_order(
    std::span<const std::uint32_t> state) const {
    if (spec_.model != Model::C2) {
        throw std::invalid_argument("admission_order needs the threshold carrier-sensing model");
    }
    // Peel from the back: the last link admitted only has to tolerate the
    // power of all others. Any subset of a valid state is valid, so peeling
    // any qualifying link never loses a solution.
    std::vector<std::uint32_t> rest(state.begin(), state.end());
    std::vector<std::uint32_t> reversed;
    reversed.reserve(rest.size());
    while (!rest.empty()) {
        std::size_t pick = rest.size();
        for (std::size_t a = 0; a < rest.size() && pick == rest.size(); ++a) {
            double sensed = cfg_.n0;
            for (std::size_t b = 0; b < rest.size(); ++b) {
                if (b != a) {
                    sensed += power_at(distance(links_[rest[b]].tx, links_[rest[a]].tx));
                }
            }
            if (at_most(sensed, t_cs_)) {
                pick = a;
            }
        }
        if (pick == rest.size()) {
            return std::nullopt;
        }
        reversed.push_back(rest[pick]);
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    return std::vector<std::uint32_t>(reversed.rbegin(), reversed.rend());
}

bool is_feasible(const FeasibleState& state, std::span<const Link> links, const FamilySpec& spec,
                 const RadioConfig& cfg) {
    return FeasibilityEvaluator(links, spec, cfg).feasible(state.members());
}

// ------------------------------------------------------- conflict graph

std::size_t ConflictGraph::edge_count() const {
    std::size_t total = 0;
    for (const auto& row : adjacency) {
        total += row.size();
    }
    return total / 2;
}

bool ConflictGraph::adjacent(std::uint32_t i, std::uint32_t j) const {
    const auto& row = adjacency.at(i);
    return std::binary_search(row.begin(), row.end(), j);
}

ConflictGraph conflict_graph(std::span<const Link> links, const FamilySpec& spec, const RadioConfig& cfg) {
    if (!is_pairwise(spec.model)) {
        throw std::invalid_argument("conflict_graph needs a pairwise model");
    }
    FeasibilityEvaluator eval(links, spec, cfg);
    const std::size_t n = links.size();
    ConflictGraph g;
    g.adjacency.assign(n, {});
    g.self_blocked.assign(n, 0);
    for (std::uint32_t i = 0; i < n; ++i) {
        g.self_blocked[i] = eval.singleton_feasible(i) ? 0 : 1;
    }

    const bool sensing = spec.model == Model::C1 || spec.model == Model::D1 || spec.model == Model::D2;
    if (sensing) {
        // Transmitter-distance rules: prefilter with the batched kernel at
        // a slightly inflated radius, then decide each candidate exactly.
        double reach = 0.0;
        const FamilyParams& p = spec.params;
        const double base = p.r_cs.value_or(cfg.r_cs);
        if (spec.model == Model::C1) {
            reach = base;
        } else {
            reach = std::max(p.r_cs_backbone.value_or(base), p.r_cs_peripheral.value_or(base));
        }
        const double r2 = reach * reach * (1.0 + 1e-6);
        std::vector<double> xs(n), ys(n);
        for (std::size_t i = 0; i < n; ++i) {
            xs[i] = links[i].tx.x;
            ys[i] = links[i].tx.y;
        }
        std::vector<std::uint8_t> mask(n);
        const auto& k = kernels::active();
        for (std::uint32_t i = 0; i < n; ++i) {
            k.within(xs[i], ys[i], xs.data(), ys.data(), n, r2, mask.data());
            for (std::uint32_t j = i + 1; j < n; ++j) {
                if (mask[j] && !(eval.pair_feasible(i, j) || g.self_blocked[i] || g.self_blocked[j])) {
                    g.adjacency[i].push_back(j);
                    g.adjacency[j].push_back(i);
                }
            }
        }
    } else {
        for (std::uint32_t i = 0; i < n; ++i) {
            for (std::uint32_t j = i + 1; j < n; ++j) {
                if (g.self_blocked[i] || g.self_blocked[j]) {
                    continue;
                }
                if (!eval.pair_feasible(i, j)) {
                    g.adjacency[i].push_back(j);
                    g.adjacency[j].push_back(i);
                }
            }
        }
    }
    for (auto& row : g.adjacency) {
        std::sort(row.begin(), row.end());
    }
    return g;
}

}  // namespace csmacap
