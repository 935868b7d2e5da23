// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "csmacap/csma.hpp"

namespace csmacap {

namespace {

struct CliqueSearch {
    std::vector<LinkMask> conflicts;  // bit j of conflicts[i]: i and j never co-active
    std::span<const double> weight;
    double best = -1.0;
    LinkMask best_set = 0;

    double sum(LinkMask s) const {
        double t = 0.0;
        for (; s != 0; s &= s - 1) {
            t += weight[static_cast<std::size_t>(std::countr_zero(s))];
        }
        return t;
    }

    // Bron-Kerbosch with pivoting over bitmasks.
    void expand(LinkMask r, LinkMask p, LinkMask x) {
        if (p == 0 && x == 0) {
            const double s = sum(r);
            if (s > best) {
                best = s;
                best_set = r;
            }
            return;
        }
        const LinkMask px = p | x;
        const auto pivot = static_cast<std::size_t>(std::countr_zero(px));
        for (LinkMask cand = p & ~conflicts[pivot]; cand != 0; cand &= cand - 1) {
            const auto v = static_cast<std::size_t>(std::countr_zero(cand));
            const LinkMask bit = LinkMask{1} << v;
            expand(r | bit, p & conflicts[v], x & conflicts[v]);
            p &= ~bit;
            x |= bit;
        }
    }
};

std::vector<std::uint32_t> to_indices(LinkMask m) {
    std::vector<std::uint32_t> out;
    for (; m != 0; m &= m - 1) {
        out.push_back(static_cast<std::uint32_t>(std::countr_zero(m)));
    }
    return out;
}

}  // namespace

FitReport fit_rates(const Family& family, std::span<const double> targets, const FitOptions& opts) {
    const std::size_t n = family.link_count();
    if (targets.size() != n) {
        throw std::invalid_argument("fit_rates: target count does not match the link count");
    }
    if (!family.is_downward_closed()) {
        throw std::invalid_argument("fit_rates: family must contain the empty set and be downward closed");
    }
    for (double c : targets) {
        if (!(c >= 0.0) || !(c <= 1.0)) {
            throw std::invalid_argument("fit_rates: targets must lie in [0, 1]");
        }
    }
    // A link that is never feasible alone is a clique that can carry nothing.
    for (std::uint32_t i = 0; i < n; ++i) {
        if (!family.contains(LinkMask{1} << i) && targets[i] > 0.0) {
            throw InfeasibleTargets("fit_rates: link " + std::to_string(i) + " is never feasible", {i}, targets[i]);
        }
    }
    CliqueSearch cs;
    cs.weight = targets;
    cs.conflicts.assign(n, 0);
    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = 0; j < n; ++j) {
            if (i != j && !family.contains((LinkMask{1} << i) | (LinkMask{1} << j))) {
                cs.conflicts[i] |= LinkMask{1} << j;
            }
        }
    }
    const LinkMask all = n == 64 ? ~LinkMask{0} : (LinkMask{1} << n) - 1;
    cs.expand(0, all, 0);
    if (cs.best >= 1.0 - 1e-12) {
        std::ostringstream os;
        os << "fit_rates: targets load a clique to " << cs.best << " (" << FeasibleState::from_mask(cs.best_set).to_string()
           << "); the idle state would need zero probability";
        throw InfeasibleTargets(os.str(), to_indices(cs.best_set), cs.best);
    }

    // Projected dual ascent on lambda >= 0 with nu = exp(lambda). The
    // gradient of the dual objective is the throughput shortfall.
    const auto masks = family.masks();
    std::vector<std::vector<std::uint32_t>> members(masks.size());
    for (std::size_t s = 0; s < masks.size(); ++s) {
        members[s] = to_indices(masks[s]);
    }
    std::vector<double> lambda(n, 0.0);
    std::vector<double> logw(masks.size());
    std::vector<double> achieved(n);
    FitReport report;
    for (std::uint64_t it = 1; it <= opts.max_iterations; ++it) {
        double peak = -INFINITY;
        for (std::size_t s = 0; s < masks.size(); ++s) {
            double w = 0.0;
            for (std::uint32_t i : members[s]) {
                w += lambda[i];
            }
            logw[s] = w;
            peak = std::max(peak, w);
        }
        double z = 0.0;
        std::fill(achieved.begin(), achieved.end(), 0.0);
        for (std::size_t s = 0; s < masks.size(); ++s) {
            const double p = std::exp(logw[s] - peak);
            z += p;
            for (std::uint32_t i : members[s]) {
                achieved[i] += p;
            }
        }
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            achieved[i] /= z;
            worst = std::max(worst, targets[i] - achieved[i]);
        }
        report.iterations = it;
        report.max_violation = worst;
        if (worst < opts.tol / 2.0) {
            break;
        }
        const double eta = opts.step / std::sqrt(static_cast<double>(it));
        for (std::size_t i = 0; i < n; ++i) {
            lambda[i] = std::max(0.0, lambda[i] + eta * (targets[i] - achieved[i]));
        }
    }
    if (report.max_violation >= opts.tol / 2.0) {
        std::ostringstream os;
        os << "fit_rates: no convergence after " << report.iterations << " iterations (worst shortfall "
           << report.max_violation << ")";
        throw std::runtime_error(os.str());
    }
    report.rates.nu.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        report.rates.nu[i] = std::exp(lambda[i]);
    }
    return report;
}

}  // namespace csmacap
