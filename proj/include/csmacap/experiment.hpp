// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "csmacap/feasibility.hpp"
#include "csmacap/highway.hpp"
#include "csmacap/spatial.hpp"

namespace csmacap {

/// Process exit codes shared by the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitViolation = 1, kExitConfig = 2, kExitConstruction = 3 };

/// Raised for malformed or inconsistent configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ------------------------------------------------------------ verify

struct VerifyConfig {
    /// Check ids to run; empty runs nothing. See verify_check_ids().
    std::vector<std::string> checks;
    std::size_t instances = 1000;
    std::size_t max_links = 8;
    std::size_t certify_instances = 1000;
    std::size_t certify_links = 6;
    /// Replace every sufficient margin by the unmargined parameter.
    bool strip_margins = false;
};

/// Every inclusion and certification check known to run_verify, in order.
const std::vector<std::string>& verify_check_ids();

struct CheckOutcome {
    std::string id;
    std::string statement;  ///< the inclusion asserted, in family notation
    std::size_t instances = 0;
    std::size_t inclusions = 0;  ///< family comparisons performed
    std::size_t violations = 0;
    std::optional<FeasibleState> counterexample;
    std::vector<Link> counterexample_links;
    double seconds = 0.0;
};

struct VerifyReport {
    std::vector<CheckOutcome> checks;
    std::vector<std::string> warnings;

    bool passed() const;
};

/// Throws ConfigError for an unknown check id.
VerifyReport run_verify(const VerifyConfig& config, const RadioConfig& radio, std::uint64_t seed);

/// Searches for a hidden-node violation at a fraction of the required range.
struct PositiveControl {
    Model target = Model::B0;
    double range_fraction = 0.5;
    std::size_t max_instances = 10000;
};

struct PositiveControlResult {
    bool found = false;
    std::size_t instances_searched = 0;
    double r_cs = 0.0;
    std::optional<FeasibleState> violation;
    std::vector<Link> links;
};

/// Uses facing-pair instances; for aggregate targets the radio config
/// should make a single interferer decisive (large alpha and beta).
PositiveControlResult search_hidden_node(const PositiveControl& control, const RadioConfig& radio,
                                         std::uint64_t seed);

// -------------------------------------------------------- throughput

struct ThroughputConfig {
    std::size_t instances = 20;
    std::size_t links = 5;
    std::uint64_t events = 1'000'000;
    double nu_min = 0.2;
    double nu_max = 5.0;
    double box_side = 6.0;  ///< transmitters uniform in a square of this side
    double r_cs = 3.0;      ///< sensing range of the c.1 family under test
    double fit_tol = 1e-3;
    std::size_t schedule_slots = 8;  ///< period of the random reference schedules
};

struct ThroughputInstance {
    std::size_t family_size = 0;
    double total_variation = 0.0;
    double fit_shortfall = 0.0;  ///< max over links of target - achieved
    std::uint64_t fit_iterations = 0;
    std::vector<double> nu;
    std::vector<double> targets;
    std::vector<double> achieved;
};

struct ThroughputReport {
    std::vector<ThroughputInstance> instances;
    double tv_limit = 0.01;
    double fit_tol = 1e-3;

    bool passed() const;
};

ThroughputReport run_throughput(const ThroughputConfig& config, const RadioConfig& radio, std::uint64_t seed);

/// Reference schedule whose states cover every member of the family, plus
/// random additional slots. Every state has positive frequency.
Schedule covering_schedule(const Family& family, std::size_t extra_slots, std::uint64_t seed);

// ------------------------------------------------------------- sweep

/// Which link length the sensing ranges are sized for.
enum class HopBounds : std::uint8_t {
    Realized,  ///< longest link of each class in the routed link set
    Nominal,   ///< sqrt(5) c1 for backbone hops, the association range otherwise
};

struct SweepConfig {
    std::vector<std::int64_t> n{256, 1024, 4096, 16384};
    std::size_t seeds = 20;
    std::uint64_t first_seed = 1;
    std::vector<SensingMode> modes{SensingMode::SingleFull, SensingMode::DualFull, SensingMode::DualHalf};
    Model target = Model::B1;
    HighwayConstants highway;
    int reuse = 3;
    double stage_share = 0.5;
    double beta_floor = 1e-3;
    bool weight_by_load = true;
    HopBounds hop_bounds = HopBounds::Realized;
    bool certify = true;
    TrafficModel traffic = TrafficModel::UniformSink;
    NodeCount count = NodeCount::Poisson;
};

struct SweepRow {
    std::int64_t n = 0;
    std::uint64_t seed = 0;
    SensingMode mode = SensingMode::SingleFull;
    std::string method = "exact";
    std::string status = "ok";
    double rate = 0.0;
    double max_relay_load = 0.0;
    LinkClass bottleneck = LinkClass::Unassigned;
    int retries = 0;
    double r_cs_backbone = 0.0;
    double r_cs_peripheral = 0.0;
    std::size_t node_count = 0;
    double seconds = 0.0;  ///< wall time; never written to the CSV

    double rate_sqrt_n() const;
    double rate_sqrt_nlogn() const;
    bool ok() const { return status == "ok"; }
};

struct ModeSummary {
    SensingMode mode = SensingMode::SingleFull;
    std::vector<std::int64_t> n;
    std::vector<double> median_rate;
    std::vector<double> median_rate_sqrt_n;
    std::vector<double> median_rate_sqrt_nlogn;
    std::vector<double> bottleneck_backbone_share;
    std::vector<std::size_t> ok_rows;
    double slope = 0.0;  ///< least squares of log median rate on log n
};

struct SweepResult {
    std::vector<SweepRow> rows;  ///< sorted by (n, seed, mode)
    std::vector<ModeSummary> summaries;
};

/// Sensing ranges for one mode: {backbone, peripheral}.
std::pair<double, double> sensing_ranges(SensingMode mode, Model target, const RadioConfig& radio,
                                         double r_tx_backbone, double r_tx_peripheral);

/// One (n, seed) pipeline for every configured mode.
std::vector<SweepRow> sweep_instance(const SweepConfig& config, const RadioConfig& radio, std::int64_t n,
                                     std::uint64_t seed);

/// Runs every (n, seed) on `jobs` threads. Output does not depend on jobs.
SweepResult run_sweep(const SweepConfig& config, const RadioConfig& radio, unsigned jobs);

std::vector<ModeSummary> summarize(const std::vector<SweepRow>& rows, const std::vector<SensingMode>& modes);

/// Least-squares slope of y on x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y);

double median(std::vector<double> v);

// -------------------------------------------------------- top level

struct ExperimentConfig {
    std::uint64_t seed = 1;
    RadioConfig radio;
    VerifyConfig verify;
    ThroughputConfig throughput;
    SweepConfig sweep;
};

}  // namespace csmacap
