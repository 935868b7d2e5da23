// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "csmacap/feasibility.hpp"

namespace csmacap {

namespace {

void grow(const FeasibilityEvaluator& eval, std::vector<std::uint32_t>& current, LinkMask mask,
          std::vector<LinkMask>& out) {
    out.push_back(mask);
    const std::uint32_t start = current.empty() ? 0 : current.back() + 1;
    for (std::uint32_t i = start; i < eval.link_count(); ++i) {
        if (eval.extends(current, i)) {
            current.push_back(i);
            grow(eval, current, mask | (LinkMask{1} << i), out);
            current.pop_back();
        }
    }
}

bool mask_less(LinkMask a, LinkMask b) {
    const int pa = std::popcount(a);
    const int pb = std::popcount(b);
    if (pa != pb) {
        return pa < pb;
    }
    // Same size: the state holding the lowest differing link sorts first.
    const LinkMask diff = a ^ b;
    return (a & diff & -diff) != 0;
}

}  // namespace

Family::Family(std::size_t link_count, std::vector<LinkMask> states)
    : link_count_(link_count), states_(std::move(states)) {
    if (link_count_ > 64) {
        throw std::length_error("Family: at most 64 links");
    }
    std::sort(states_.begin(), states_.end(), mask_less);
    states_.erase(std::unique(states_.begin(), states_.end()), states_.end());
    lookup_.insert(states_.begin(), states_.end());
}

std::vector<FeasibleState> Family::states() const {
    std::vector<FeasibleState> out;
    out.reserve(states_.size());
    for (LinkMask m : states_) {
        out.push_back(FeasibleState::from_mask(m));
    }
    return out;
}

bool Family::is_downward_closed() const {
    if (!contains(0)) {
        return false;
    }
    for (LinkMask m : states_) {
        for (LinkMask rest = m; rest != 0; rest &= rest - 1) {
            if (!contains(m & ~(rest & -rest))) {
                return false;
            }
        }
    }
    return true;
}

Family enumerate_family(std::span<const Link> links, const FamilySpec& spec, const RadioConfig& cfg,
                        std::size_t cap) {
    if (links.size() > cap || links.size() > 63) {
        throw std::length_error("enumerate_family: link count exceeds the enumeration cap");
    }
    FeasibilityEvaluator eval(links, spec, cfg);
    std::vector<LinkMask> out;
    std::vector<std::uint32_t> current;
    grow(eval, current, 0, out);
    return Family(links.size(), std::move(out));
}

InclusionResult check_inclusion(const FamilySpec& a, const FamilySpec& b, std::span<const Link> links,
                                const RadioConfig& cfg, std::size_t cap) {
    const Family fb = enumerate_family(links, b, cfg, cap);
    FeasibilityEvaluator ea(links, a, cfg);
    InclusionResult result;
    // States come ordered by size, so the first miss is a smallest one.
    for (LinkMask m : fb.masks()) {
        ++result.states_checked;
        const FeasibleState s = FeasibleState::from_mask(m);
        if (!ea.feasible(s.members())) {
            result.holds = false;
            result.counterexample = s;
            break;
        }
    }
    return result;
}

}  // namespace csmacap
