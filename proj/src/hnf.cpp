// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csmacap Authors

#include "csmacap/hnf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "csmacap/rng.hpp"

namespace csmacap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

double term(std::uint64_t k, double alpha) {
    const double kd = static_cast<double>(k);
    return 4.0 * std::ceil(kPi * (2.0 * kd + 2.0)) * std::pow(kd, -alpha);
}

// Integral from a to infinity of c1 x^(1-alpha) + c0 x^(-alpha).
double tail_integral(double a, double c1, double c0, double alpha) {
    return c1 * std::pow(a, 2.0 - alpha) / (alpha - 2.0) + c0 * std::pow(a, 1.0 - alpha) / (alpha - 1.0);
}

PenaltyConstant enclose(double alpha, double partial, std::uint64_t terms) {
    const double kd = static_cast<double>(terms);
    // ceil(pi(2x+2)) lies in [pi(2x+2), pi(2x+2)+1] and both envelopes
    // decrease, so the sum beyond `terms` sits between the integrals.
    const double low = tail_integral(kd + 1.0, 8.0 * kPi, 8.0 * kPi, alpha);
    const double high = tail_integral(kd, 8.0 * kPi, 8.0 * kPi + 4.0, alpha);
    const double rounding = (kd + 16.0) * std::numeric_limits<double>::epsilon() * partial;
    PenaltyConstant out;
    out.terms = terms;
    out.lower = partial + low - rounding;
    out.upper = partial + high + rounding;
    out.value = 0.5 * (out.lower + out.upper);
    return out;
}

void check_alpha(double alpha) {
    if (!(alpha > 2.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("penalty constant diverges for a path-loss exponent <= 2");
    }
}

}  // namespace

PenaltyConstant penalty_constant_terms(double alpha, std::uint64_t terms) {
    check_alpha(alpha);
    if (terms == 0) {
        throw std::invalid_argument("penalty constant needs at least one explicit term");
    }
    double partial = 0.0;
    for (std::uint64_t k = terms; k >= 1; --k) {  // small terms first
        partial += term(k, alpha);
    }
    return enclose(alpha, partial, terms);
}

PenaltyConstant penalty_constant(double alpha, double tol) {
    check_alpha(alpha);
    if (!(tol > 0.0)) {
        throw std::invalid_argument("penalty constant tolerance must be positive");
    }
    std::uint64_t terms = 64;
    constexpr std::uint64_t kMaxTerms = std::uint64_t{1} << 36;
    while (true) {
        PenaltyConstant pc = penalty_constant_terms(alpha, terms);
        if (pc.upper - pc.lower <= tol || terms >= kMaxTerms) {
            return pc;
        }
        // Width shrinks like terms^(1-alpha); jump close to the target.
        const double width = pc.upper - pc.lower;
        const double factor = std::pow(width / tol, 1.0 / (alpha - 1.0));
        const double next = std::ceil(static_cast<double>(terms) * std::clamp(factor * 1.05, 2.0, 1024.0));
        terms = std::min<std::uint64_t>(kMaxTerms, static_cast<std::uint64_t>(next));
    }
}

double bidir_margin(double beta, double alpha) {
    if (!(beta >= 0.0) || !(alpha > 0.0)) {
        throw std::invalid_argument("bidir_margin: beta must be non-negative and alpha positive");
    }
    return std::pow(2.0 + std::pow(beta, 1.0 / alpha), alpha);
}

double pairwise_exclusion_range(double beta, double r_tx, const RadioConfig& cfg) {
    const double x = (cfg.p_tx / beta * std::pow(r_tx, -cfg.alpha) - cfg.n0) / cfg.p_tx;
    if (!(x > 0.0)) {
        return kInf;
    }
    return std::pow(x, -1.0 / cfg.alpha);
}

double aggregate_exclusion_range(double beta, double r_tx, double k, const RadioConfig& cfg) {
    const double x = (cfg.p_tx / beta * std::pow(r_tx, -cfg.alpha) - cfg.n0) / (cfg.p_tx * k);
    if (!(x > 0.0)) {
        return kInf;
    }
    return std::pow(x, -1.0 / cfg.alpha) + r_tx;
}

HnfCondition required_cs_range(const FamilySpec& target, const RadioConfig& cfg) {
    cfg.validate();
    const FamilyParams& p = target.params;
    const double r_tx = p.r_tx.value_or(cfg.r_tx);
    const double r_xcl = p.r_xcl.value_or(cfg.r_xcl);
    const double delta = p.delta.value_or(cfg.delta);
    const double beta = p.beta.value_or(cfg.beta);

    HnfCondition out;
    out.target = target.model;
    out.inputs = {{"r_tx", r_tx}, {"alpha", cfg.alpha}, {"p_tx", cfg.p_tx}, {"n0", cfg.n0}};
    const std::string sense = "sensing[r_cs]";

    switch (target.model) {
        case Model::B0: {
            out.formula_id = "fixed-range: r_xcl + 2 r_tx";
            out.inputs.emplace_back("r_xcl", r_xcl);
            out.r_cs_required = r_xcl + 2.0 * r_tx;
            out.chain = {sense + " ⊆ bi-fixed-range[r_cs - 2 r_tx]"};
            out.chain_alternative = out.r_cs_required;
            out.alternative_chain = out.chain;
            break;
        }
        case Model::B1: {
            out.formula_id = "SIR: (3 + delta) r_tx";
            out.inputs.emplace_back("delta", delta);
            out.r_cs_required = (3.0 + delta) * r_tx;
            out.chain = {sense + " ⊆ bi-fixed-range[(1 + delta) r_tx]", "bi-fixed-range[(1 + delta) r_tx] ⊆ bi-SIR[delta]"};
            out.chain_alternative = (4.0 + delta) * r_tx;
            out.alternative_chain = {sense + " ⊆ uni-fixed-range[r_cs - r_tx]",
                                     "uni-fixed-range[(3 + delta) r_tx] ⊆ uni-SIR[delta + 2]",
                                     "uni-SIR[delta + 2] ⊆ bi-SIR[delta]"};
            break;
        }
        case Model::B2: {
            const double margin = bidir_margin(beta, cfg.alpha);
            out.formula_id = "pairwise SINR: pw_range(beta') + 2 r_tx, beta' = (2 + beta^(1/alpha))^alpha";
            out.inputs.emplace_back("beta", beta);
            out.inputs.emplace_back("beta_prime", margin);
            const double r = pairwise_exclusion_range(margin, r_tx, cfg);
            out.r_cs_required = r + 2.0 * r_tx;
            out.chain = {sense + " ⊆ bi-fixed-range[r_cs - 2 r_tx]", "bi-fixed-range ⊆ uni-fixed-range",
                         "uni-fixed-range[pw_range(beta')] ⊆ uni-pw-SINR[beta']", "uni-pw-SINR[beta'] ⊆ bi-pw-SINR[beta]"};
            out.chain_alternative = pairwise_exclusion_range(beta, r_tx, cfg) + 2.0 * r_tx;
            out.alternative_chain = {sense + " ⊆ bi-fixed-range[r_cs - 2 r_tx]",
                                     "bi-fixed-range[pw_range(beta)] ⊆ bi-pw-SINR[beta]"};
            if (!std::isfinite(r)) {
                out.diagnostic = "noise floor exceeds P r_tx^-alpha / beta'; no finite sensing range exists";
            }
            break;
        }
        case Model::B3: {
            const double margin = bidir_margin(beta, cfg.alpha);
            const PenaltyConstant k = penalty_constant(cfg.alpha);
            out.formula_id = "aggregate SINR: ag_range(beta', k) + 2 r_tx, beta' = (2 + beta^(1/alpha))^alpha";
            out.inputs.emplace_back("beta", beta);
            out.inputs.emplace_back("beta_prime", margin);
            out.inputs.emplace_back("k_upper", k.upper);
            // The upper end of the enclosure keeps the range conservative.
            const double r = aggregate_exclusion_range(margin, r_tx, k.upper, cfg);
            out.r_cs_required = r + 2.0 * r_tx;
            out.chain = {sense + " ⊆ bi-fixed-range[r_cs - 2 r_tx]", "bi-fixed-range ⊆ uni-fixed-range",
                         "uni-fixed-range[ag_range(beta', k)] ⊆ uni-ag-SINR[beta']", "uni-ag-SINR[beta'] ⊆ bi-ag-SINR[beta]"};
            out.chain_alternative = out.r_cs_required;
            out.alternative_chain = out.chain;
            if (!std::isfinite(r)) {
                out.diagnostic = "noise floor exceeds P r_tx^-alpha / beta'; no finite sensing range exists";
            }
            break;
        }
        default:
            throw std::invalid_argument("required_cs_range: target must be one of b.0, b.1, b.2, b.3");
    }
    if (!std::isfinite(out.r_cs_required)) {
        out.r_cs_required = kInf;
        if (out.diagnostic.empty()) {
            out.diagnostic = "range is unbounded";
        }
    }
    return out;
}

CertifyResult certify_hnf(std::span<const Link> links, double r_cs, const FamilySpec& target,
                          const RadioConfig& cfg, const CertifyOptions& opts) {
    if (!(r_cs > 0.0)) {
        throw std::invalid_argument("certify_hnf: sensing range must be positive");
    }
    FamilySpec sensing{Model::C1, {}};
    sensing.params.r_cs = r_cs;
    CertifyResult out;
    FeasibilityEvaluator target_eval(links, target, cfg);

    if (opts.mode == CertifyMode::Exhaustive) {
        const Family fam = enumerate_family(links, sensing, cfg, opts.cap);
        for (LinkMask m : fam.masks()) {
            ++out.states_checked;
            const FeasibleState s = FeasibleState::from_mask(m);
            if (!target_eval.feasible(s.members())) {
                out.certified = false;
                out.violation = s;
                return out;
            }
        }
        return out;
    }

    // Sampled: random maximal independent sets of the sensing conflict
    // graph, plus a random subset of each.
    const ConflictGraph g = conflict_graph(links, sensing, cfg);
    Rng rng(derive_seed(opts.seed, 0xC0FFEE));
    const std::size_t n = links.size();
    std::vector<std::uint32_t> order(n);
    std::vector<std::uint8_t> blocked(n);
    for (std::size_t s = 0; s < opts.samples; ++s) {
        for (std::uint32_t i = 0; i < n; ++i) {
            order[i] = i;
        }
        for (std::size_t i = n; i > 1; --i) {
            std::swap(order[i - 1], order[rng.below(i)]);
        }
        std::fill(blocked.begin(), blocked.end(), 0);
        std::vector<std::uint32_t> chosen;
        for (std::uint32_t i : order) {
            if (blocked[i] || g.self_blocked[i]) {
                continue;
            }
            chosen.push_back(i);
            for (std::uint32_t j : g.adjacency[i]) {
                blocked[j] = 1;
            }
        }
        for (int variant = 0; variant < 2; ++variant) {
            std::vector<std::uint32_t> state;
            for (std::uint32_t i : chosen) {
                if (variant == 0 || rng.bernoulli(0.5)) {
                    state.push_back(i);
                }
            }
            ++out.states_checked;
            FeasibleState fs(state);
            if (!target_eval.feasible(fs.members())) {
                out.certified = false;
                out.violation = fs;
                return out;
            }
        }
    }
    return out;
}

}  // namespace csmacap
