// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "csmacap/geometry.hpp"

namespace csmacap {

/// Physical constants and default thresholds. Family specs may override
/// the thresholds per family.
struct RadioConfig {
    double p_tx = 1.0;
    double n0 = 0.0;
    double alpha = 4.0;
    double beta = 1.0;
    double delta = 1.0;
    double r_tx = 1.0;
    double r_xcl = 2.0;
    double r_cs = 4.0;
    double t_cs = 1.0;

    /// Throws std::invalid_argument on a path-loss exponent <= 2 or any
    /// non-positive threshold.
    void validate() const;
};

/// Feasibility models. U*/B* are the uni- and bidirectional interference
/// models, C* carrier sensing, D* dual sensing, E1 the half-duplex
/// two-channel aggregate model.
enum class Model : std::uint8_t { A0, A1, A2, A3, B0, B1, B2, B3, C1, C2, D1, D2, E1 };

std::string_view model_label(Model m);

/// Accepts "a.0" .. "e.1". Throws std::invalid_argument otherwise.
Model parse_model(std::string_view label);

bool is_pairwise(Model m);
bool is_dual(Model m);

/// Threshold overrides. Unset fields fall back to the RadioConfig.
struct FamilyParams {
    std::optional<double> r_xcl;
    std::optional<double> r_tx;
    std::optional<double> delta;
    std::optional<double> beta;
    std::optional<double> r_cs;
    std::optional<double> t_cs;
    std::optional<double> r_cs_backbone;
    std::optional<double> r_cs_peripheral;
    std::optional<double> beta_backbone;
    std::optional<double> beta_peripheral;
    /// Per-link SINR thresholds; when non-empty it must match the link count.
    std::vector<double> per_link_beta;
    /// Use the tighter two-sided interference sum for b.3.
    bool sharp_b3 = false;
};

struct FamilySpec {
    Model model = Model::C1;
    FamilyParams params;
};

using LinkMask = std::uint64_t;

/// A set of link indices, stored sorted and duplicate-free.
class FeasibleState {
public:
    FeasibleState() = default;
    /// Throws std::invalid_argument on duplicate indices.
    explicit FeasibleState(std::vector<std::uint32_t> members);
    static FeasibleState from_mask(LinkMask mask);

    std::span<const std::uint32_t> members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    bool contains(std::uint32_t i) const;
    /// Throws std::out_of_range when an index does not fit in 64 bits.
    LinkMask mask() const;
    std::string to_string() const;

    friend bool operator==(const FeasibleState&, const FeasibleState&) = default;
    friend std::strong_ordering operator<=>(const FeasibleState& a, const FeasibleState& b);

private:
    std::vector<std::uint32_t> members_;
};

/// Parameters resolved for one link set; answers membership queries fast.
class FeasibilityEvaluator {
public:
    /// Validates the config and the spec against the links.
    FeasibilityEvaluator(std::span<const Link> links, const FamilySpec& spec, const RadioConfig& cfg);

    std::size_t link_count() const { return links_.size(); }
    const FamilySpec& spec() const { return spec_; }

    /// Throws std::out_of_range for indices past the link set.
    bool feasible(std::span<const std::uint32_t> state) const;

    /// Membership of base + {i}, assuming base itself is feasible.
    bool extends(std::span<const std::uint32_t> base, std::uint32_t i) const;

    /// Pairwise models only: {i, j} is feasible.
    bool pair_feasible(std::uint32_t i, std::uint32_t j) const;
    bool singleton_feasible(std::uint32_t i) const;

    /// Carrier-sensing threshold model: an admission order for the state,
    /// or nullopt when none exists.
    std::optional<std::vector<std::uint32_t>> admission_order(std::span<const std::uint32_t> state) const;

private:
    bool pair_ok(std::uint32_t i, std::uint32_t j) const;  // i receives, j interferes
    bool aggregate_ok(std::span<const std::uint32_t> state) const;
    bool node_disjoint(std::span<const std::uint32_t> state) const;
    double beta_of(std::uint32_t i) const;
    double range_of(std::uint32_t i) const;
    double power_at(double d) const;

    std::span<const Link> links_;
    FamilySpec spec_;
    RadioConfig cfg_;
    double r_xcl_, r_tx_, delta_, beta_, r_cs_, t_cs_;
    double r_cs_b_, r_cs_p_, beta_b_, beta_p_;
};

/// Membership test. Throws std::out_of_range for a bad index and
/// std::invalid_argument for a dual model over unclassified links.
bool is_feasible(const FeasibleState& state, std::span<const Link> links, const FamilySpec& spec,
                 const RadioConfig& cfg);

/// A downward-closed set of states over at most 64 links.
class Family {
public:
    Family() = default;
    Family(std::size_t link_count, std::vector<LinkMask> states);

    std::size_t link_count() const { return link_count_; }
    std::size_t size() const { return states_.size(); }
    std::span<const LinkMask> masks() const { return states_; }
    bool contains(LinkMask m) const { return lookup_.count(m) != 0; }
    std::vector<FeasibleState> states() const;
    /// Contains the empty set and every state minus one link.
    bool is_downward_closed() const;

private:
    std::size_t link_count_ = 0;
    std::vector<LinkMask> states_;
    std::unordered_set<LinkMask> lookup_;
};

inline constexpr std::size_t kDefaultEnumerationCap = 20;

/// Every feasible state. Throws std::length_error above the cap.
Family enumerate_family(std::span<const Link> links, const FamilySpec& spec, const RadioConfig& cfg,
                        std::size_t cap = kDefaultEnumerationCap);

struct InclusionResult {
    bool holds = true;
    std::optional<FeasibleState> counterexample;  ///< in B but not in A, of minimum size
    std::size_t states_checked = 0;
};

/// Decides family(a) ⊇ family(b) by enumerating b.
InclusionResult check_inclusion(const FamilySpec& a, const FamilySpec& b, std::span<const Link> links,
                                const RadioConfig& cfg, std::size_t cap = kDefaultEnumerationCap);

/// Edges join links that cannot be active together. Links that are
/// infeasible even alone are flagged in self_blocked.
struct ConflictGraph {
    std::vector<std::vector<std::uint32_t>> adjacency;
    std::vector<std::uint8_t> self_blocked;

    std::size_t size() const { return adjacency.size(); }
    std::size_t edge_count() const;
    bool adjacent(std::uint32_t i, std::uint32_t j) const;
};

/// Pairwise models only; throws std::invalid_argument for aggregate ones.
ConflictGraph conflict_graph(std::span<const Link> links, const FamilySpec& spec, const RadioConfig& cfg);

}  // namespace csmacap
