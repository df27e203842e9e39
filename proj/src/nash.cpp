#include "rsgame/nash.hpp"

#include <algorithm>
#include <cmath>

namespace rsgame {

StrategyField best_response(const GameSpec& spec, const Grid& grid, const ThetaGrid& tg,
                            double alpha, int player, const StrategyField& opponent,
                            const HjbOptions& opts) {
    DiscountedSolve s = solve_discounted(spec, grid, tg, alpha, player, opponent, opts);
    return std::move(s.selector);
}

NashReport nash_iterate(const GameSpec& spec, const Grid& grid, const ThetaGrid& tg,
                        double alpha, const StrategyField& init1,
                        const StrategyField& init2, const NashOptions& opts) {
    NashReport rep;
    init1.validate();
    init2.validate();
    long n = grid.size();
    int nl = tg.n_levels();
    auto lift = [&](const StrategyField& f) {
        // promote to a per-level field so convex averaging is well defined
        if (!f.stationary()) return f;
        StrategyField g(f.actions(), n, nl);
        for (int j = 0; j < nl; ++j)
            for (long i = 0; i < n; ++i) g.set(j, i, f.mixed(0, i));
        return g;
    };
    rep.s1 = lift(init1);
    rep.s2 = lift(init2);

    int m = 0;
    for (; m < opts.max_iter; ++m) {
        DiscountedSolve br1 = solve_discounted(spec, grid, tg, alpha, 1, rep.s2, opts.hjb);
        DiscountedSolve br2 = solve_discounted(spec, grid, tg, alpha, 2, rep.s1, opts.hjb);
        double beta = opts.harmonic ? 1.0 / (m + 1.0) : opts.beta;
        StrategyField prev1 = rep.s1, prev2 = rep.s2;
        rep.s1.blend(br1.selector, beta);
        rep.s2.blend(br2.selector, beta);
        rep.change = std::max(StrategyField::sup_tv_change(prev1, rep.s1),
                              StrategyField::sup_tv_change(prev2, rep.s2));
        rep.v1 = std::move(br1.psi);
        rep.v2 = std::move(br2.psi);
        if (rep.change <= opts.strat_tol) {
            ++m;
            break;
        }
    }
    rep.iterations = m;

    // final best-response values and coupled residuals at the final pair
    DiscountedSolve f1 = solve_discounted(spec, grid, tg, alpha, 1, rep.s2, opts.hjb);
    DiscountedSolve f2 = solve_discounted(spec, grid, tg, alpha, 2, rep.s1, opts.hjb);
    rep.v1 = std::move(f1.psi);
    rep.v2 = std::move(f2.psi);
    rep.resid1 =
        discounted_residual(spec, grid, tg, alpha, 1, rep.v1, rep.s1, rep.s2).combined();
    rep.resid2 =
        discounted_residual(spec, grid, tg, alpha, 2, rep.v2, rep.s2, rep.s1).combined();
    rep.converged = rep.change <= opts.strat_tol && rep.resid1 <= opts.resid_tol &&
                    rep.resid2 <= opts.resid_tol;
    return rep;
}

DeviationOutcome deviation_test(const GameSpec& spec, const Grid& grid,
                                const ThetaGrid& tg, double alpha,
                                const StrategyField& s1, const StrategyField& s2,
                                const std::vector<StrategyField>& deviations1,
                                const std::vector<StrategyField>& deviations2,
                                const HjbOptions& opts) {
    DeviationOutcome out;
    ValueField base1 = evaluate_discounted(spec, grid, tg, alpha, 1, s1, s2, opts);
    ValueField base2 = evaluate_discounted(spec, grid, tg, alpha, 2, s1, s2, opts);
    auto scan = [&](int player, const ValueField& base,
                    const std::vector<StrategyField>& devs) {
        for (size_t d = 0; d < devs.size(); ++d) {
            ValueField dev = (player == 1)
                                 ? evaluate_discounted(spec, grid, tg, alpha, 1, devs[d], s2, opts)
                                 : evaluate_discounted(spec, grid, tg, alpha, 2, s1, devs[d], opts);
            for (size_t j = 0; j < base.levels.size(); ++j)
                for (long i = 0; i < base.n_nodes; ++i) {
                    double imp = (base.levels[j][i] - dev.levels[j][i]) / dev.levels[j][i];
                    if (imp > out.worst_improvement) {
                        out.worst_improvement = imp;
                        out.worst_player = player;
                        out.worst_deviation = static_cast<int>(d);
                    }
                }
        }
    };
    scan(1, base1, deviations1);
    scan(2, base2, deviations2);
    return out;
}

}  // namespace rsgame
