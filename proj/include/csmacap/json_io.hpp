// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include <json.hpp>

#include "csmacap/csma.hpp"
#include "csmacap/experiment.hpp"
#include "csmacap/hnf.hpp"
#include "csmacap/highway.hpp"

namespace csmacap {

using json = nlohmann::ordered_json;

/// Rounds to 12 significant digits, the precision used for coordinates.
double round12(double v);

/// printf("%.17g"); round-trips every double.
std::string format_double(double v);

json to_json(const NodeSet& nodes, const SourceSinkPairs* pairs = nullptr);
NodeSet node_set_from_json(const json& j);
SourceSinkPairs pairs_from_json(const json& j);

json to_json(const RadioConfig& cfg);
/// Missing fields keep their defaults; unknown fields raise ConfigError.
RadioConfig radio_from_json(const json& j, RadioConfig base = {});

json to_json(const FamilySpec& spec);
FamilySpec family_spec_from_json(const json& j);

json to_json(const HnfCondition& cond);
json to_json(std::span<const Link> links);
std::vector<Link> links_from_json(const json& j);

json to_json(const HighwaySystem& hs);
json to_json(const RoutePlan& plan);

/// One {"t", "link", "ev"} object per line.
void write_trace_ndjson(std::ostream& os, const SimTrace& trace);
/// Header "state,probability"; states as "{i,j,...}".
void write_occupancy_csv(std::ostream& os, const std::map<LinkMask, double>& occupancy);

/// Throws ConfigError on type errors or unknown keys.
ExperimentConfig experiment_from_json(const json& j);
json to_json(const ExperimentConfig& cfg);
/// Reads and parses a config file. Throws ConfigError.
ExperimentConfig load_experiment(const std::string& path);

json to_json(const VerifyReport& report);
json to_json(const ThroughputReport& report);
json to_json(const SweepResult& result);

/// Columns: n, seed, mode, method, status, min_flow_rate, rate_sqrt_n,
/// rate_sqrt_nlogn, max_relay_load, bottleneck_class, percolation_retries.
void write_sweep_csv(std::ostream& os, const SweepResult& result);

}  // namespace csmacap
