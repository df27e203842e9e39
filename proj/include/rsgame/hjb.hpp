#pragma once

#include "rsgame/fields.hpp"
#include "rsgame/generator.hpp"
#include "rsgame/grid.hpp"
#include "rsgame/model.hpp"

namespace rsgame {

struct HjbOptions {
    int max_policy_iter = 50;
    double bound_slack = 1e-8;
    double mono_slack = 1e-10;
    bool enforce_invariants = true;
};

struct DiscountedSolve {
    ValueField psi;
    StrategyField selector;  // Dirac mixed action per (theta level, node)
};

/// Marches the risk-level equation upward in s = log(theta) from the kappa
/// floor, optimizing the acting player's pure action per node against the
/// fixed opponent field (Howard iteration per level). The level step applies
/// the running-cost factor exp((dtheta/alpha) r) exactly and the generator
/// implicitly, which preserves the a-priori bounds 1 <= psi <= e^{theta|r|/a}
/// and theta-monotonicity at the discrete level.
DiscountedSolve solve_discounted(const GameSpec& spec, const Grid& grid,
                                 const ThetaGrid& tg, double alpha, int player,
                                 const StrategyField& opponent,
                                 const HjbOptions& opts = {});

/// Same marching with both strategies fixed (linear level steps).
ValueField evaluate_discounted(const GameSpec& spec, const Grid& grid,
                               const ThetaGrid& tg, double alpha, int player,
                               const StrategyField& v1, const StrategyField& v2,
                               const HjbOptions& opts = {});

/// Per-node argmin over the acting player's pure actions of
///   F(u) = (own upwind drift stencil applied to psi) + theta * r_k * psi,
/// ties broken toward the lowest action index. F extends affinely to mixed
/// actions, so a vertex always attains the infimum.
std::vector<int> minimizing_selector(const GameSpec& spec, const Grid& grid,
                                     const Vec& psi_level, double theta, int player,
                                     const StrategyField& opponent, int opp_level);

StrategyField selectors_to_field(const std::vector<std::vector<int>>& sel, int actions);

struct CoupledDefect {
    double attainment = 0.0;  // does the given own strategy attain the level equation
    double inf_form = 0.0;    // negative part of the min-form defect
    double combined() const { return std::max(attainment, inf_form); }
};

/// Direct evaluation of the discretized level equations at a given value
/// field and strategy pair (no solves): the fixed-point residual of the
/// coupled system for the acting player.
CoupledDefect discounted_residual(const GameSpec& spec, const Grid& grid,
                                  const ThetaGrid& tg, double alpha, int player,
                                  const ValueField& psi, const StrategyField& own,
                                  const StrategyField& opponent);

}  // namespace rsgame
