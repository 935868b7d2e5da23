// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

#include "csmacap/csma.hpp"
#include "csmacap/kernels.hpp"
#include "csmacap/rng.hpp"

namespace csmacap {

namespace {

constexpr std::uint64_t kTagSim = 0x51A1;

void check_rate_vector(const BackoffRates& rates, std::size_t n) {
    if (rates.nu.size() != n) {
        throw std::invalid_argument("backoff rate count does not match the link count");
    }
    for (double v : rates.nu) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("backoff rates must be positive and finite");
        }
    }
}

std::vector<std::uint32_t> members_of(LinkMask m) {
    std::vector<std::uint32_t> out;
    for (; m != 0; m &= m - 1) {
        out.push_back(static_cast<std::uint32_t>(std::countr_zero(m)));
    }
    return out;
}

/// Prefix sums over non-negative weights with O(log n) update and search.
class Fenwick {
public:
    explicit Fenwick(std::size_t n) : tree_(n + 1, 0.0), value_(n, 0.0) {}

    void set(std::size_t i, double v) {
        const double delta = v - value_[i];
        value_[i] = v;
        for (std::size_t k = i + 1; k < tree_.size(); k += k & (~k + 1)) {
            tree_[k] += delta;
        }
    }

    double value(std::size_t i) const { return value_[i]; }

    double total() const {
        double s = 0.0;
        for (std::size_t k = tree_.size() - 1; k > 0; k -= k & (~k + 1)) {
            s += tree_[k];
        }
        return s;
    }

    /// Index whose cumulative interval contains u, skipping zero weights.
    std::size_t find(double u) const {
        std::size_t pos = 0;
        std::size_t step = std::bit_floor(tree_.size() - 1);
        for (; step > 0; step >>= 1) {
            if (pos + step < tree_.size() && tree_[pos + step] <= u) {
                pos += step;
                u -= tree_[pos];
            }
        }
        std::size_t i = std::min(pos, value_.size() - 1);
        // Rounding can land on an empty slot; move to a live neighbour.
        for (std::size_t k = i; k < value_.size(); ++k) {
            if (value_[k] > 0.0) {
                return k;
            }
        }
        for (std::size_t k = i; k-- > 0;) {
            if (value_[k] > 0.0) {
                return k;
            }
        }
        return i;
    }

    void rebuild() {
        std::fill(tree_.begin(), tree_.end(), 0.0);
        for (std::size_t i = 0; i < value_.size(); ++i) {
            for (std::size_t k = i + 1; k < tree_.size(); k += k & (~k + 1)) {
                tree_[k] += value_[i];
            }
        }
    }

private:
    std::vector<double> tree_;
    std::vector<double> value_;
};

/// Chain on the independent sets of a symmetric blocking relation.
SimTrace run_blocking(const std::vector<std::vector<std::uint32_t>>& neighbours,
                      const std::vector<std::uint8_t>& self_blocked, const BackoffRates& rates,
                      const SimOptions& opts) {
    const std::size_t n = neighbours.size();
    check_rate_vector(rates, n);
    if (opts.track_states && n > 64) {
        throw std::invalid_argument("state tracking supports at most 64 links");
    }
    SimTrace trace;
    trace.busy_time.assign(n, 0.0);
    if (n == 0) {
        return trace;
    }
    Rng rng(derive_seed(opts.seed, kTagSim));
    std::vector<std::uint32_t> blocked(n, 0);
    std::vector<std::uint8_t> active(n, 0);
    std::vector<double> started(n, 0.0);
    Fenwick fw(n);
    for (std::size_t i = 0; i < n; ++i) {
        fw.set(i, self_blocked[i] ? 0.0 : rates.nu[i]);
    }
    LinkMask mask = 0;
    double t = 0.0;
    std::vector<std::uint32_t> active_list;
    for (std::uint64_t e = 0; e < opts.events; ++e) {
        if ((e & 0xFFFF) == 0xFFFF) {
            fw.rebuild();
        }
        const double total = fw.total();
        if (!(total > 0.0)) {
            break;  // every link is permanently blocked
        }
        const double dt = rng.exponential(total);
        if (opts.track_states) {
            trace.state_time[mask] += dt;
        }
        t += dt;
        const auto i = static_cast<std::uint32_t>(fw.find(rng.uniform() * total));
        if (active[i]) {
            active[i] = 0;
            trace.busy_time[i] += t - started[i];
            fw.set(i, blocked[i] == 0 && !self_blocked[i] ? rates.nu[i] : 0.0);
            for (std::uint32_t j : neighbours[i]) {
                if (--blocked[j] == 0 && !active[j] && !self_blocked[j]) {
                    fw.set(j, rates.nu[j]);
                }
            }
            if (opts.track_states) {
                mask &= ~(LinkMask{1} << i);
            }
        } else {
            active[i] = 1;
            started[i] = t;
            fw.set(i, 1.0);
            for (std::uint32_t j : neighbours[i]) {
                if (blocked[j]++ == 0 && !active[j]) {
                    fw.set(j, 0.0);
                }
            }
            if (opts.track_states) {
                mask |= LinkMask{1} << i;
            }
        }
        if (opts.record_events) {
            trace.events.push_back({t, i, active[i] ? EventKind::Start : EventKind::End});
        }
        ++trace.event_count;
        if (opts.observer) {
            if (active[i]) {
                active_list.insert(std::upper_bound(active_list.begin(), active_list.end(), i), i);
            } else {
                active_list.erase(std::lower_bound(active_list.begin(), active_list.end(), i));
            }
            opts.observer(active_list);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (active[i]) {
            trace.busy_time[i] += t - started[i];
        }
    }
    trace.total_time = t;
    return trace;
}

}  // namespace

std::vector<double> SimTrace::airtime() const {
    std::vector<double> out(busy_time.size(), 0.0);
    if (total_time > 0.0) {
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = busy_time[i] / total_time;
        }
    }
    return out;
}

std::map<LinkMask, double> SimTrace::occupancy() const {
    std::map<LinkMask, double> out;
    if (total_time > 0.0) {
        for (const auto& [s, dt] : state_time) {
            out[s] = dt / total_time;
        }
    }
    return out;
}

SimTrace simulate_ctmc(const Family& family, const BackoffRates& rates, const SimOptions& opts) {
    const std::size_t n = family.link_count();
    check_rate_vector(rates, n);
    if (!family.contains(0)) {
        throw std::invalid_argument("simulate_ctmc: family must contain the empty set");
    }
    struct Move {
        std::size_t next;
        std::uint32_t link;
        double rate;
    };
    const auto masks = family.masks();
    std::unordered_map<LinkMask, std::size_t> index;
    for (std::size_t s = 0; s < masks.size(); ++s) {
        index.emplace(masks[s], s);
    }
    std::vector<std::vector<Move>> moves(masks.size());
    std::vector<double> out_rate(masks.size(), 0.0);
    for (std::size_t s = 0; s < masks.size(); ++s) {
        for (std::uint32_t i = 0; i < n; ++i) {
            const LinkMask bit = LinkMask{1} << i;
            const LinkMask next = masks[s] ^ bit;
            const auto it = index.find(next);
            if (it == index.end()) {
                continue;
            }
            const double r = (masks[s] & bit) ? 1.0 : rates.nu[i];
            moves[s].push_back({it->second, i, r});
            out_rate[s] += r;
        }
    }

    SimTrace trace;
    trace.busy_time.assign(n, 0.0);
    Rng rng(derive_seed(opts.seed, kTagSim));
    std::size_t cur = index.at(0);
    double t = 0.0;
    for (std::uint64_t e = 0; e < opts.events; ++e) {
        const double total = out_rate[cur];
        if (!(total > 0.0)) {
            break;
        }
        const double dt = rng.exponential(total);
        if (opts.track_states) {
            trace.state_time[masks[cur]] += dt;
        }
        for (LinkMask m = masks[cur]; m != 0; m &= m - 1) {
            trace.busy_time[static_cast<std::size_t>(std::countr_zero(m))] += dt;
        }
        t += dt;
        double u = rng.uniform() * total;
        const Move* pick = &moves[cur].back();
        for (const Move& mv : moves[cur]) {
            if (u < mv.rate) {
                pick = &mv;
                break;
            }
            u -= mv.rate;
        }
        const bool start = (masks[pick->next] >> pick->link) & 1U;
        cur = pick->next;
        if (opts.record_events) {
            trace.events.push_back({t, pick->link, start ? EventKind::Start : EventKind::End});
        }
        ++trace.event_count;
        if (opts.observer) {
            opts.observer(members_of(masks[cur]));
        }
    }
    trace.total_time = t;
    return trace;
}

SimTrace simulate_ctmc(const ConflictGraph& graph, const BackoffRates& rates, const SimOptions& opts) {
    return run_blocking(graph.adjacency, graph.self_blocked, rates, opts);
}

SimTrace simulate_ipcs(std::span<const Link> links, double r_cs, const RadioConfig& cfg, const BackoffRates& rates,
                       const SimOptions& opts) {
    cfg.validate();
    if (!(r_cs > 0.0)) {
        throw std::invalid_argument("simulate_ipcs: sensing range must be positive");
    }
    const std::size_t n = links.size();
    // Each start or end changes the power sensed at every other
    // transmitter by P d^-alpha. The counter moves when that step reaches
    // the power of a transmitter at the sensing range. The batched kernel
    // only shortlists candidates; the decision is made on the power itself.
    const double threshold = cfg.p_tx * std::pow(r_cs, -cfg.alpha);
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = links[i].tx.x;
        ys[i] = links[i].tx.y;
    }
    const double r2 = r_cs * r_cs * (1.0 + 1e-6);
    std::vector<std::vector<std::uint32_t>> senses(n);
    std::vector<std::uint8_t> mask(n);
    const auto& k = kernels::active();
    for (std::uint32_t i = 0; i < n; ++i) {
        k.within(xs[i], ys[i], xs.data(), ys.data(), n, r2, mask.data());
        for (std::uint32_t j = 0; j < n; ++j) {
            if (j == i || !mask[j]) {
                continue;
            }
            const double step = cfg.p_tx * std::pow(distance(links[i].tx, links[j].tx), -cfg.alpha);
            if (step >= threshold) {
                senses[i].push_back(j);
            }
        }
    }
    const std::vector<std::uint8_t> none(n, 0);
    return run_blocking(senses, none, rates, opts);
}

}  // namespace csmacap
