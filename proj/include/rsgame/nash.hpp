#pragma once

#include "rsgame/hjb.hpp"

namespace rsgame {

struct NashOptions {
    double strat_tol = 1e-4;  // sup over nodes of total-variation change
    double resid_tol = 1e-3;  // relative defect of the coupled level equations
    double dev_tol = 5e-3;
    int max_iter = 200;
    bool harmonic = false;    // beta_m = 1/(m+1)
    double beta = 0.5;
    HjbOptions hjb;
};

struct NashReport {
    StrategyField s1, s2;
    ValueField v1, v2;  // best-response values against the final pair
    int iterations = 0;
    double change = 0.0;
    double resid1 = 0.0, resid2 = 0.0;
    bool converged = false;
};

/// One best-response map: solve the acting player's equation against the
/// fixed opponent and return the minimizing selector field.
StrategyField best_response(const GameSpec& spec, const Grid& grid, const ThetaGrid& tg,
                            double alpha, int player, const StrategyField& opponent,
                            const HjbOptions& opts = {});

/// Damped fictitious play on the best-response maps. Non-convergence is a
/// legitimate outcome and is reported, not thrown.
NashReport nash_iterate(const GameSpec& spec, const Grid& grid, const ThetaGrid& tg,
                        double alpha, const StrategyField& init1,
                        const StrategyField& init2, const NashOptions& opts = {});

struct DeviationOutcome {
    double worst_improvement = 0.0;  // relative; positive means a deviation helps
    int worst_player = 0;
    int worst_deviation = -1;
};

/// Evaluates every listed unilateral deviation and reports the worst relative
/// improvement over the equilibrium candidate's own value.
DeviationOutcome deviation_test(const GameSpec& spec, const Grid& grid,
                                const ThetaGrid& tg, double alpha,
                                const StrategyField& s1, const StrategyField& s2,
                                const std::vector<StrategyField>& deviations1,
                                const std::vector<StrategyField>& deviations2,
                                const HjbOptions& opts = {});

}  // namespace rsgame
