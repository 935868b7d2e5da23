// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "csmacap/csma.hpp"
#include "csmacap/feasibility.hpp"
#include "csmacap/spatial.hpp"

namespace csmacap {

/// Raised when the backbone cannot be built or a node cannot be attached.
class ConstructionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct HighwayConstants {
    double c1 = 2.0;        ///< cell side
    double slab_c2 = 2.0;   ///< slab height is ceil(slab_c2 * ln n / c1) cells
    double assoc_c2 = 2.0;  ///< association range is assoc_c2 * ln n
    std::optional<std::size_t> load_cap;  ///< default ceil(4 c1 assoc_c2 ln n)
    int max_retries = 3;    ///< c1 doubles on each percolation failure
};

/// Square cells of side c1; cell (col, row) has index row * cells_per_side + col.
struct CellGrid {
    double cell_side = 0.0;
    double side_length = 0.0;
    std::size_t cells_per_side = 0;
    std::vector<std::vector<std::uint32_t>> members;
    std::vector<Point> nodes;

    std::size_t cell_count() const { return members.size(); }
    std::size_t cell_of(Point p) const;
    std::size_t col(std::size_t cell) const { return cell % cells_per_side; }
    std::size_t row(std::size_t cell) const { return cell / cells_per_side; }
    Point center(std::size_t cell) const;
    bool occupied(std::size_t cell) const { return !members[cell].empty(); }
};

/// Half-open cells: a node on a shared edge belongs to the cell on its
/// right or above. Throws std::invalid_argument when c1 <= 0.
CellGrid build_grid(const NodeSet& nodes, double c1);

/// Override occupancy for tests: cells flagged false are emptied.
void mask_grid(CellGrid& grid, const std::vector<bool>& keep);

struct HighwayPath {
    bool horizontal = true;
    std::size_t slab = 0;
    std::vector<std::size_t> cells;  ///< consecutive cells share a side
};

struct HighwaySystem {
    CellGrid grid;
    HighwayConstants constants;  ///< as used, after retries
    int retries = 0;
    double nominal_n = 0.0;
    std::size_t slab_height = 0;
    std::vector<HighwayPath> paths;
    std::vector<std::int64_t> cell_rep;     ///< backbone node per cell on a path, else -1
    std::vector<std::int32_t> cell_hpath;   ///< horizontal path through the cell, else -1
    std::vector<std::int32_t> cell_vpath;   ///< vertical path through the cell, else -1
    std::vector<std::int32_t> cell_hpos;    ///< position along that horizontal path
    std::vector<std::int32_t> cell_vpos;
    std::vector<std::int64_t> association;  ///< node -> backbone node; a backbone node maps to itself
    std::vector<std::uint8_t> is_backbone;
    double assoc_range = 0.0;
    std::size_t load_cap = 0;

    bool associated() const { return !association.empty(); }
    double backbone_hop_bound() const { return std::sqrt(5.0) * constants.c1; }
};

/// Crossing paths per slab via unit vertex capacity max-flow. Retries with a
/// doubled c1 up to max_retries times; throws ConstructionError afterwards.
/// `nodes` is needed to rebuild the grid on a retry.
HighwaySystem build_highways(const NodeSet& nodes, const CellGrid& grid, const HighwayConstants& constants);

/// Attaches every non-backbone node to the nearest backbone node with spare
/// capacity within the association range. Throws ConstructionError when some
/// node has no candidate.
void associate_peripherals(HighwaySystem& hs);

struct RoutePlan {
    std::vector<Link> links;
    std::vector<std::uint32_t> link_tx;
    std::vector<std::uint32_t> link_rx;
    std::vector<double> load;  ///< summed demand of the flows crossing each link
    std::vector<std::vector<std::uint32_t>> routes;  ///< per pair, link indices in order
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    /// Longest realized hop per class; never above sqrt(5) c1 and the
    /// association range respectively.
    double backbone_hop_bound = 0.0;
    double peripheral_hop_bound = 0.0;

    double max_load(LinkClass cls) const;
};

/// Ingress hop, horizontal-then-vertical backbone segment, egress hop.
RoutePlan plan_routes(const SourceSinkPairs& pairs, const HighwaySystem& hs);

enum class SensingMode : std::uint8_t { SingleFull, DualFull, DualHalf };

std::string_view sensing_label(SensingMode m);
SensingMode parse_sensing(std::string_view label);

/// Relaxed SINR threshold for a hop longer than the backbone bound.
double peripheral_beta(double beta, double r_tx_backbone, double hop, double alpha, double floor);

struct ScheduleSettings {
    FamilySpec target{Model::B1, {}};
    RadioConfig cfg;
    double r_cs_backbone = 0.0;
    double r_cs_peripheral = 0.0;
    int reuse = 3;  ///< k in the k x k colouring
    bool half_duplex = false;
    bool certify = true;
    double beta_floor = 1e-3;  ///< lower clamp for relaxed peripheral thresholds
    /// Give each link slots in proportion to its relay load instead of one
    /// slot per square cycle.
    bool weight_by_load = false;
};

struct TwoStageSchedule {
    Schedule peripheral;
    Schedule backbone;
    std::size_t certified_states = 0;
};

/// Spatial reuse: squares of side r_cs / (k - 1), k^2 colours, one link per
/// square per slot. Throws ConstructionError when an emitted state fails
/// certification against the target family.
TwoStageSchedule two_stage_schedule(const RoutePlan& plan, const ScheduleSettings& settings);

/// Certification spec for the plan's links: target model with the class
/// hop bound as r_tx and relaxed peripheral thresholds.
FamilySpec certification_spec(const RoutePlan& plan, const ScheduleSettings& settings);

struct FlowRate {
    double rate = 0.0;
    std::int64_t bottleneck_link = -1;
    LinkClass bottleneck_class = LinkClass::Unassigned;
    std::vector<double> airtime;
    std::vector<double> pair_rate;
};

/// Airtime per link from the stage schedules, then for each pair the
/// minimum of airtime / load along its route. Single-channel modes split
/// time between the stages with `stage_share` going to the peripheral one.
FlowRate min_flow_rate(const RoutePlan& plan, const TwoStageSchedule& schedules, SensingMode mode,
                       double stage_share = 0.5);

/// Same accounting from externally supplied per-link airtimes.
FlowRate min_flow_rate(const RoutePlan& plan, std::vector<double> airtime);

}  // namespace csmacap
