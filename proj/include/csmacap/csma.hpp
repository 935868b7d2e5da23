// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "csmacap/feasibility.hpp"

namespace csmacap {

/// Per-link backoff rates; the mean backoff of link i is 1 / nu[i].
struct BackoffRates {
    std::vector<double> nu;
};

/// Product-form distribution over a family: P(S) ∝ prod_{i in S} nu_i.
struct StationaryDistribution {
    std::vector<LinkMask> states;
    std::vector<double> probability;
    std::vector<double> throughput;  ///< per-link marginal activity

    double probability_of(LinkMask s) const;
};

/// Throws std::invalid_argument for a rate count mismatch, a
/// non-positive rate, or a family that is not downward closed.
StationaryDistribution stationary(const Family& family, const BackoffRates& rates);

/// A cyclic sequence of states, each slot of equal length.
struct Schedule {
    std::size_t link_count = 0;
    std::vector<FeasibleState> states;
};

/// Fraction of slots in which each link is active.
std::vector<double> tdma_throughput(const Schedule& schedule);

enum class EventKind : std::uint8_t { Start, End };

struct SimEvent {
    double t = 0.0;
    std::uint32_t link = 0;
    EventKind kind = EventKind::Start;
};

struct SimOptions {
    std::uint64_t events = 100000;  ///< number of transitions to simulate
    std::uint64_t seed = 1;
    bool record_events = false;
    /// Time spent per state; needs at most 64 links.
    bool track_states = true;
    /// Called with the sorted active set after every transition.
    std::function<void(std::span<const std::uint32_t>)> observer;
};

struct SimTrace {
    std::vector<SimEvent> events;
    std::map<LinkMask, double> state_time;
    std::vector<double> busy_time;  ///< per link
    double total_time = 0.0;
    std::uint64_t event_count = 0;

    /// Per-link fraction of time active.
    std::vector<double> airtime() const;
    /// Time-weighted state occupancy (requires track_states).
    std::map<LinkMask, double> occupancy() const;
};

/// Exact event-driven run of the chain over an enumerated family.
SimTrace simulate_ctmc(const Family& family, const BackoffRates& rates, const SimOptions& opts);

/// Same chain where the family is the independent sets of a conflict graph.
SimTrace simulate_ctmc(const ConflictGraph& graph, const BackoffRates& rates, const SimOptions& opts);

/// Counter-based sensing: each transmitter tracks jumps in sensed power and
/// may count down only while no sensed transmitter is active.
SimTrace simulate_ipcs(std::span<const Link> links, double r_cs, const RadioConfig& cfg, const BackoffRates& rates,
                       const SimOptions& opts);

/// 0.5 * sum |p(S) - q(S)| over the union of supports.
double total_variation(const std::map<LinkMask, double>& p, const std::map<LinkMask, double>& q);
double total_variation(const StationaryDistribution& exact, const std::map<LinkMask, double>& empirical);

struct FitOptions {
    double tol = 1e-3;
    std::uint64_t max_iterations = 2'000'000;
    double step = 1.0;  ///< base step; iteration k uses step / sqrt(k)
};

struct FitReport {
    BackoffRates rates;
    std::uint64_t iterations = 0;
    double max_violation = 0.0;  ///< max over links of target - achieved
};

/// Raised when targets cannot be met with strictly positive idle time.
class InfeasibleTargets : public std::runtime_error {
public:
    InfeasibleTargets(const std::string& what, std::vector<std::uint32_t> clique, double load)
        : std::runtime_error(what), clique_(std::move(clique)), load_(load) {}

    /// Links no two of which are ever active together.
    const std::vector<std::uint32_t>& clique() const { return clique_; }
    /// Sum of their targets.
    double load() const { return load_; }

private:
    std::vector<std::uint32_t> clique_;
    double load_;
};

/// Backoff rates whose stationary throughput meets every target within tol.
/// Throws InfeasibleTargets with a clique certificate when some clique is
/// loaded to 1 or more, and std::runtime_error when the iteration budget
/// runs out.
FitReport fit_rates(const Family& family, std::span<const double> targets, const FitOptions& opts = {});

}  // namespace csmacap
