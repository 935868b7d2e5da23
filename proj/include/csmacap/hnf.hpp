// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "csmacap/feasibility.hpp"

namespace csmacap {

/// Certified enclosure of sum_{k>=1} 4*ceil(pi*(2k+2)) * k^-alpha.
struct PenaltyConstant {
    double value = 0.0;  ///< midpoint of [lower, upper]
    double lower = 0.0;
    double upper = 0.0;
    std::uint64_t terms = 0;  ///< explicit terms summed before the tail bound
};

/// Doubles the explicit term count until the enclosure is narrower than
/// tol. Throws std::invalid_argument for alpha <= 2 or tol <= 0.
PenaltyConstant penalty_constant(double alpha, double tol = 1e-3);

/// Enclosure using exactly `terms` explicit terms. Enclosures nest: more
/// terms never widen the interval.
PenaltyConstant penalty_constant_terms(double alpha, std::uint64_t terms);

/// (2 + beta^(1/alpha))^alpha, the SINR threshold that makes the
/// unidirectional family sit inside the bidirectional one.
double bidir_margin(double beta, double alpha);

/// Smallest exclusion distance r with P r_tx^-alpha >= beta (N0 + P r^-alpha).
/// +inf when the noise floor alone violates the threshold.
double pairwise_exclusion_range(double beta, double r_tx, const RadioConfig& cfg);

/// Exclusion distance that bounds aggregate interference from a whole
/// exclusion-spaced field: pairwise range with the power scaled by k,
/// plus r_tx. +inf under the same noise condition.
double aggregate_exclusion_range(double beta, double r_tx, double k, const RadioConfig& cfg);

/// Sensing range that makes the carrier-sensing family hidden-node-free
/// with respect to a bidirectional target.
struct HnfCondition {
    Model target = Model::B0;
    double r_cs_required = 0.0;  ///< +inf when unattainable
    std::string formula_id;
    std::vector<std::pair<std::string, double>> inputs;
    /// Inclusion steps from the sensing family up to the target.
    std::vector<std::string> chain;
    /// Range implied by the shortest alternative inclusion chain.
    double chain_alternative = 0.0;
    std::vector<std::string> alternative_chain;
    std::string diagnostic;  ///< set when the range is infinite
};

/// Target must be b.0..b.3; thresholds come from the spec params with the
/// config as fallback. r_tx must bound every link length in the set.
HnfCondition required_cs_range(const FamilySpec& target, const RadioConfig& cfg);

enum class CertifyMode : std::uint8_t { Exhaustive, Sampled };

struct CertifyOptions {
    CertifyMode mode = CertifyMode::Exhaustive;
    std::size_t samples = 2000;
    std::uint64_t seed = 1;
    std::size_t cap = kDefaultEnumerationCap;
};

struct CertifyResult {
    bool certified = true;
    std::optional<FeasibleState> violation;  ///< sensing state outside the target
    std::size_t states_checked = 0;
};

/// Checks every (or a random sample of) state of the pairwise sensing
/// family at r_cs against the target family.
CertifyResult certify_hnf(std::span<const Link> links, double r_cs, const FamilySpec& target,
                          const RadioConfig& cfg, const CertifyOptions& opts = {});

}  // namespace csmacap
