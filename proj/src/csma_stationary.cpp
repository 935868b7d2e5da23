// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#include <algorithm>
#include <bit>
#include <cmath>

#include "csmacap/csma.hpp"

namespace csmacap {

namespace {

void check_rates(const Family& family, const BackoffRates& rates) {
    if (rates.nu.size() != family.link_count()) {
        throw std::invalid_argument("backoff rate count does not match the link count");
    }
    for (double v : rates.nu) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("backoff rates must be positive and finite");
        }
    }
}

}  // namespace

double StationaryDistribution::probability_of(LinkMask s) const {
    const auto it = std::find(states.begin(), states.end(), s);
    return it == states.end() ? 0.0 : probability[static_cast<std::size_t>(it - states.begin())];
}

StationaryDistribution stationary(const Family& family, const BackoffRates& rates) {
    check_rates(family, rates);
    if (!family.is_downward_closed()) {
        throw std::invalid_argument("stationary: family must contain the empty set and be downward closed");
    }
    const std::size_t n = family.link_count();
    std::vector<double> log_nu(n);
    for (std::size_t i = 0; i < n; ++i) {
        log_nu[i] = std::log(rates.nu[i]);
    }
    StationaryDistribution out;
    out.states.assign(family.masks().begin(), family.masks().end());
    out.probability.resize(out.states.size());
    double peak = -INFINITY;
    for (std::size_t s = 0; s < out.states.size(); ++s) {
        double w = 0.0;
        for (LinkMask m = out.states[s]; m != 0; m &= m - 1) {
            w += log_nu[static_cast<std::size_t>(std::countr_zero(m))];
        }
        out.probability[s] = w;
        peak = std::max(peak, w);
    }
    double total = 0.0;
    for (double& p : out.probability) {
        p = std::exp(p - peak);
        total += p;
    }
    out.throughput.assign(n, 0.0);
    for (std::size_t s = 0; s < out.states.size(); ++s) {
        out.probability[s] /= total;
        for (LinkMask m = out.states[s]; m != 0; m &= m - 1) {
            out.throughput[static_cast<std::size_t>(std::countr_zero(m))] += out.probability[s];
        }
    }
    return out;
}

std::vector<double> tdma_throughput(const Schedule& schedule) {
    if (schedule.states.empty()) {
        throw std::invalid_argument("tdma_throughput: schedule has no slots");
    }
    std::vector<double> count(schedule.link_count, 0.0);
    for (const FeasibleState& s : schedule.states) {
        for (std::uint32_t i : s.members()) {
            if (i >= schedule.link_count) {
                throw std::out_of_range("tdma_throughput: link index out of range");
            }
            count[i] += 1.0;
        }
    }
    const double m = static_cast<double>(schedule.states.size());
    for (double& c : count) {
        c /= m;
    }
    return count;
}

double total_variation(const std::map<LinkMask, double>& p, const std::map<LinkMask, double>& q) {
    double sum = 0.0;
    for (const auto& [s, v] : p) {
        const auto it = q.find(s);
        sum += std::abs(v - (it == q.end() ? 0.0 : it->second));
    }
    for (const auto& [s, v] : q) {
        if (p.find(s) == p.end()) {
            sum += std::abs(v);
        }
    }
    return 0.5 * sum;
}

double total_variation(const StationaryDistribution& exact, const std::map<LinkMask, double>& empirical) {
    std::map<LinkMask, double> p;
    for (std::size_t s = 0; s < exact.states.size(); ++s) {
        p[exact.states[s]] = exact.probability[s];
    }
    return total_variation(p, empirical);
}

}  // namespace csmacap
