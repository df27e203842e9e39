#include "rsgame/ergodic.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>

namespace rsgame {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

struct EigenSolve {
    double lambda = 0.0;  // principal eigenvalue of Q + theta diag(r)
    Vec psi;
    double residual = 0.0;
    int iterations = 0;
};

// Inverse power iteration on B = shift I - (Q + theta diag(r)). B is a
// strictly row-diagonally-dominant M-matrix for shift > theta max(r), so its
// inverse is nonnegative and the iteration converges to the positive
// principal pair.
EigenSolve principal_pair(const StencilMatrix& Q, const Vec& r, double theta,
                          double shift, long x0, const ErgodicOptions& opts) {
    long n = Q.n;
    SpMat B = assemble_system(Q, shift, 1.0, &r, theta);
    Eigen::SparseLU<SpMat> lu;
    lu.compute(B);
    if (lu.info() != Eigen::Success)
        throw NumericalError("ergodic solve: factorization of the shifted system failed");

    Vec psi(n, 1.0);
    Vec Apsi(n);
    double lambda = 0.0, resid = 1e300, prev_resid = 1e300;
    int it = 0;
    int stall = 0;
    for (; it < opts.max_inner; ++it) {
        Eigen::Map<const Eigen::VectorXd> b(psi.data(), n);
        Eigen::VectorXd y = lu.solve(b);
        if (lu.info() != Eigen::Success)
            throw NumericalError("ergodic solve: back substitution failed");
        double anchor = y[x0];
        if (!(anchor > 0.0))
            throw NumericalError("ergodic solve: iterate lost positivity at the anchor");
        for (long i = 0; i < n; ++i) psi[i] = y[i] / anchor;

        // A psi with A = Q + theta diag(r)
        Q.apply(psi, Apsi);
        for (long i = 0; i < n; ++i) Apsi[i] += theta * r[i] * psi[i];
        double num = 0.0, den = 0.0;
        for (long i = 0; i < n; ++i) {
            num += Apsi[i] * psi[i];
            den += psi[i] * psi[i];
        }
        lambda = num / den;
        double norm = sup_abs(psi);
        resid = 0.0;
        for (long i = 0; i < n; ++i)
            resid = std::max(resid, std::abs(Apsi[i] - lambda * psi[i]));
        resid /= norm;
        if (resid <= opts.eig_resid_tol) break;
        if (resid > 0.9999 * prev_resid) {
            if (++stall > 50) {
                double rate = resid / prev_resid;
                throw NumericalError(
                    "ergodic solve: power iteration stagnated (reduction ratio " +
                    format_g17(rate) + ", eigenvalue gap too small)");
            }
        } else {
            stall = 0;
        }
        prev_resid = resid;
    }
    if (resid > opts.eig_resid_tol)
        throw NumericalError("ergodic solve: inverse power iteration did not reach the "
                             "residual tolerance (last residual " + format_g17(resid) + ")");
    EigenSolve out;
    out.lambda = lambda;
    out.psi = std::move(psi);
    out.residual = resid;
    out.iterations = it + 1;
    return out;
}

void check_rho_range(double rho, double r_sup) {
    if (rho < -1e-8 || rho > r_sup + 1e-8)
        throw NumericalError("ergodic solve: rho " + format_g17(rho) +
                             " escapes [0, |r|] = [0, " + format_g17(r_sup) + "]");
}

void check_certificate_bounds(const ErgodicSolution& sol, const Grid& grid,
                              const LyapunovCertificate& cert, double slack) {
    auto mask = c0_mask(cert, grid);
    double x[kMaxDim];
    double wx0;
    {
        grid.node(sol.x0, x);
        wx0 = cert.W.value(x);
    }
    for (long i = 0; i < grid.size(); ++i) {
        grid.node(i, x);
        double w = cert.W.value(x);
        if (sol.psi[i] > w * (1.0 + slack))
            throw NumericalError("ergodic solution exceeds the W envelope at node " +
                                 std::to_string(i));
        if (mask[i] && sol.psi[i] < 1.0 / wx0 - slack)
            throw NumericalError("ergodic solution drops below 1/W(x0) on C0 at node " +
                                 std::to_string(i));
    }
}

double policy_defect(const GameSpec& spec, const Grid& grid, double theta, int player,
                     const StrategyField& opponent, const ErgodicSolution& sol) {
    // || min_u [Q_u psi + theta r_u psi] - theta rho psi || / scale
    auto sel_field = [&](const std::vector<int>& s) {
        StrategyField f(spec.actions(player), grid.size(), 1);
        for (long i = 0; i < grid.size(); ++i) f.set_dirac(0, i, s[i]);
        return f;
    };
    std::vector<int> best = minimizing_selector(spec, grid, sol.psi, theta, player,
                                                opponent, 0);
    StrategyField own = sel_field(best);
    const StrategyField& v1 = (player == 1) ? own : opponent;
    const StrategyField& v2 = (player == 1) ? opponent : own;
    Vec g = mixed_generator_apply(spec, grid, v1, v2, 0, sol.psi);
    double worst = 0.0;
    double x[kMaxDim];
    for (long i = 0; i < grid.size(); ++i) {
        grid.node(i, x);
        double r = mix_cost(spec, player, x, v1.mixed(0, i), v2.mixed(0, i));
        double lhs = g[i] + theta * r * sol.psi[i];
        worst = std::max(worst, std::abs(lhs - theta * sol.rho * sol.psi[i]));
    }
    double scale = std::max(theta * std::abs(sol.rho) * sup_abs(sol.psi), 1e-12);
    return worst / scale;
}

}  // namespace

std::vector<char> c0_mask(const LyapunovCertificate& cert, const Grid& grid) {
    std::vector<char> mask(grid.size(), 0);
    double x[kMaxDim];
    double bar = 1.0 + cert.c / cert.delta;
    long count = 0;
    for (long i = 0; i < grid.size(); ++i) {
        grid.node(i, x);
        if (cert.W.value(x) > bar) {
            mask[i] = 1;
            ++count;
        }
    }
    if (count == 0)
        throw ConfigError("certificate: C0 = {W > 1 + c/delta} misses the grid; "
                          "enlarge the domain");
    return mask;
}

long default_anchor(const LyapunovCertificate& cert, const Grid& grid) {
    double x[kMaxDim];
    long best = 0;
    double bw = -1e300;
    for (long i = 0; i < grid.size(); ++i) {
        grid.node(i, x);
        double w = cert.W.value(x);
        if (w > bw) {
            bw = w;
            best = i;
        }
    }
    return best;
}

ErgodicResult solve_ergodic_br(const GameSpec& spec, const Grid& grid, double theta,
                               int player, const StrategyField& opponent, long x0,
                               const ErgodicOptions& opts,
                               const LyapunovCertificate* cert) {
    if (!(theta > 0.0)) throw ConfigError("ergodic solve: theta must be positive");
    opponent.validate();
    if (!opponent.stationary())
        throw ConfigError("ergodic solve: opponent must be a stationary field");
    if (cert) {
        auto mask = c0_mask(*cert, grid);
        if (!mask[x0]) throw ConfigError("ergodic solve: anchor x0 must lie in C0");
    }
    double r_sup = spec.cost_sup(player, grid);
    double shift = theta * r_sup + 1.0;
    GeneratorParts parts = GeneratorParts::build(spec, grid);
    long n = grid.size();

    // own cost table
    const ScalarTerm& ownc = spec.own_cost(player);
    std::vector<Vec> c_own(spec.actions(player), Vec(n));
    Vec c_cross(n, 0.0);
    {
        double x[kMaxDim];
        const ScalarTerm& crossc = spec.cross_cost(player);
        for (long i = 0; i < n; ++i) {
            grid.node(i, x);
            for (int u = 0; u < spec.actions(player); ++u) c_own[u][i] = ownc.eval(x, u);
            for (int u = 0; u < crossc.actions; ++u)
                c_cross[i] += opponent.weight(0, i, u) * crossc.eval(x, u);
        }
    }

    StencilMatrix fixed = parts.diffusion;
    {
        Vec w(n);
        const auto& Bopp = (player == 1) ? parts.drift2 : parts.drift1;
        for (int u = 0; u < spec.actions(player == 1 ? 2 : 1); ++u) {
            for (long i = 0; i < n; ++i) w[i] = opponent.weight(0, i, u);
            fixed.add_row_scaled(Bopp[u], w.data());
        }
    }
    const auto& Bown = (player == 1) ? parts.drift1 : parts.drift2;

    std::vector<int> pi(n, 0);
    std::vector<std::vector<int>> history;
    ErgodicResult best;
    double best_resid = 1e300;
    int outer = 0;
    bool stabilized = false;
    for (; outer < opts.max_outer; ++outer) {
        StencilMatrix Q = fixed;
        Vec r(n);
        for (long i = 0; i < n; ++i) {
            const StencilMatrix& b = Bown[pi[i]];
            for (int a = 0; a < Q.dim; ++a) {
                Q.lower[a][i] += b.lower[a][i];
                Q.upper[a][i] += b.upper[a][i];
            }
            Q.diag[i] += b.diag[i];
            r[i] = c_own[pi[i]][i] + c_cross[i];
        }
        EigenSolve es = principal_pair(Q, r, theta, shift, x0, opts);

        ErgodicResult cur;
        cur.sol.rho = es.lambda / theta;
        cur.sol.psi = es.psi;
        cur.sol.x0 = x0;
        cur.sol.player = player;
        cur.sol.theta = theta;
        cur.eig_residual = es.residual;
        cur.selector = StrategyField(spec.actions(player), n, 1);
        for (long i = 0; i < n; ++i) cur.selector.set_dirac(0, i, pi[i]);
        cur.policy_residual = policy_defect(spec, grid, theta, player, opponent, cur.sol);
        cur.outer_iterations = outer + 1;
        if (cur.policy_residual < best_resid) {
            best_resid = cur.policy_residual;
            best = cur;
        }

        std::vector<int> pi_next =
            minimizing_selector(spec, grid, es.psi, theta, player, opponent, 0);
        if (pi_next == pi) {
            stabilized = true;
            best = cur;
            break;
        }
        if (std::find(history.begin(), history.end(), pi_next) != history.end()) {
            best.cycled = true;  // cycling: keep the best-residual iterate
            break;
        }
        history.push_back(pi);
        pi = std::move(pi_next);
    }
    if (!stabilized && !best.cycled && outer >= opts.max_outer)
        throw NumericalError("ergodic solve: selector did not stabilize within " +
                             std::to_string(opts.max_outer) + " outer iterations");

    check_rho_range(best.sol.rho, r_sup);
    for (double v : best.sol.psi)
        if (!(v > 0.0))
            throw NumericalError("ergodic solve: eigenvector lost positivity");
    if (cert && opts.enforce_bounds)
        check_certificate_bounds(best.sol, grid, *cert, opts.bound_slack);
    return best;
}

ErgodicResult evaluate_ergodic(const GameSpec& spec, const Grid& grid, double theta,
                               int player, const StrategyField& v1,
                               const StrategyField& v2, long x0,
                               const ErgodicOptions& opts,
                               const LyapunovCertificate* cert) {
    v1.validate();
    v2.validate();
    if (!v1.stationary() || !v2.stationary())
        throw ConfigError("ergodic evaluation: both strategies must be stationary");
    GeneratorParts parts = GeneratorParts::build(spec, grid);
    StencilMatrix Q = mixed_stencil(parts, v1, v2, 0);
    long n = grid.size();
    Vec r(n);
    double x[kMaxDim];
    for (long i = 0; i < n; ++i) {
        grid.node(i, x);
        r[i] = mix_cost(spec, player, x, v1.mixed(0, i), v2.mixed(0, i));
    }
    double r_sup = spec.cost_sup(player, grid);
    EigenSolve es = principal_pair(Q, r, theta, theta * r_sup + 1.0, x0, opts);
    ErgodicResult res;
    res.sol.rho = es.lambda / theta;
    res.sol.psi = std::move(es.psi);
    res.sol.x0 = x0;
    res.sol.player = player;
    res.sol.theta = theta;
    res.eig_residual = es.residual;
    res.selector = (player == 1) ? v1 : v2;
    res.outer_iterations = 1;
    check_rho_range(res.sol.rho, r_sup);
    if (cert && opts.enforce_bounds)
        check_certificate_bounds(res.sol, grid, *cert, opts.bound_slack);
    return res;
}

ErgodicNashReport nash_iterate_ergodic(const GameSpec& spec, const Grid& grid,
                                       double theta, long x0,
                                       const StrategyField& init1,
                                       const StrategyField& init2,
                                       const ErgodicNashOptions& opts,
                                       const LyapunovCertificate* cert) {
    ErgodicNashReport rep;
    rep.s1 = init1;
    rep.s2 = init2;
    rep.s1.validate();
    rep.s2.validate();
    int m = 0;
    for (; m < opts.max_iter; ++m) {
        ErgodicResult br1 =
            solve_ergodic_br(spec, grid, theta, 1, rep.s2, x0, opts.inner, cert);
        ErgodicResult br2 =
            solve_ergodic_br(spec, grid, theta, 2, rep.s1, x0, opts.inner, cert);
        double beta = opts.harmonic ? 1.0 / (m + 1.0) : opts.beta;
        StrategyField prev1 = rep.s1, prev2 = rep.s2;
        rep.s1.blend(br1.selector, beta);
        rep.s2.blend(br2.selector, beta);
        rep.sol1 = br1.sol;
        rep.sol2 = br2.sol;
        rep.change = std::max(StrategyField::sup_tv_change(prev1, rep.s1),
                              StrategyField::sup_tv_change(prev2, rep.s2));
        if (rep.change <= opts.strat_tol) {
            ++m;
            break;
        }
    }
    rep.iterations = m;

    // residuals of the coupled long-run system at the final pair
    ErgodicResult v1 = solve_ergodic_br(spec, grid, theta, 1, rep.s2, x0, opts.inner, cert);
    ErgodicResult v2 = solve_ergodic_br(spec, grid, theta, 2, rep.s1, x0, opts.inner, cert);
    rep.sol1 = v1.sol;
    rep.sol2 = v2.sol;
    auto attain_defect = [&](int player, const ErgodicSolution& sol,
                             const StrategyField& own, const StrategyField& opp) {
        const StrategyField& f1 = (player == 1) ? own : opp;
        const StrategyField& f2 = (player == 1) ? opp : own;
        Vec g = mixed_generator_apply(spec, grid, f1, f2, 0, sol.psi);
        double worst = 0.0;
        double x[kMaxDim];
        for (long i = 0; i < grid.size(); ++i) {
            grid.node(i, x);
            double r = mix_cost(spec, player, x, f1.mixed(0, i), f2.mixed(0, i));
            worst = std::max(worst, std::abs(g[i] + theta * r * sol.psi[i] -
                                             theta * sol.rho * sol.psi[i]));
        }
        return worst / std::max(theta * std::abs(sol.rho) * sup_abs(sol.psi), 1e-12);
    };
    rep.resid1 = std::max(v1.policy_residual, attain_defect(1, v1.sol, rep.s1, rep.s2));
    rep.resid2 = std::max(v2.policy_residual, attain_defect(2, v2.sol, rep.s2, rep.s1));
    rep.converged = rep.change <= opts.strat_tol && rep.resid1 <= opts.resid_tol &&
                    rep.resid2 <= opts.resid_tol;
    return rep;
}

VanishingDiscountReport vanishing_discount_check(
    const GameSpec& spec, const Grid& grid, const ThetaGrid& tg, double theta,
    int player, const StrategyField& v1, const StrategyField& v2,
    const std::vector<double>& alphas, long x0, const ErgodicOptions& opts) {
    if (alphas.size() < 2)
        throw ConfigError("vanishing discount: need at least two alpha values");
    for (size_t i = 1; i < alphas.size(); ++i)
        if (alphas[i] >= alphas[i - 1])
            throw ConfigError("vanishing discount: alpha list must decrease");

    VanishingDiscountReport rep;
    rep.alphas = alphas;
    int j = std::min(tg.nearest_level(theta), tg.n_steps() - 1);
    rep.theta_used = tg.node(j);

    // core sub-box: central 50% of the domain
    std::vector<long> core;
    for (long i = 0; i < grid.size(); ++i) {
        bool in = true;
        for (int a = 0; a < grid.dim(); ++a)
            if (std::abs(grid.coord(i, a)) > 0.5 * grid.half_width(a) + 1e-12) in = false;
        if (in) core.push_back(i);
    }

    for (double alpha : alphas) {
        ValueField vf = evaluate_discounted(spec, grid, tg, alpha, player, v1, v2);
        double acc = 0.0;
        for (long i : core) {
            double dlog = std::log(vf.at(j + 1, i)) - std::log(vf.at(j, i));
            acc += alpha * tg.node(j) * dlog / tg.dtheta(j);
        }
        rep.etas.push_back(acc / static_cast<double>(core.size()));
    }

    // monotone trend check
    for (size_t i = 2; i < rep.etas.size(); ++i) {
        double d1 = rep.etas[i - 1] - rep.etas[i - 2];
        double d2 = rep.etas[i] - rep.etas[i - 1];
        if (d1 * d2 < -1e-18) rep.monotone = false;
    }

    // Richardson extrapolation using the last three entries (alpha halving)
    size_t k = rep.etas.size();
    double eta_last = rep.etas[k - 1];
    if (k >= 3) {
        double d1 = rep.etas[k - 2] - rep.etas[k - 3];
        double d2 = rep.etas[k - 1] - rep.etas[k - 2];
        double p = (d1 != 0.0 && d2 != 0.0 && d1 * d2 > 0.0)
                       ? std::log2(std::abs(d1 / d2))
                       : 1.0;
        p = std::clamp(p, 0.5, 3.0);
        rep.rate_estimate = p;
        double f = std::pow(2.0, p);
        rep.extrapolated = (f * rep.etas[k - 1] - rep.etas[k - 2]) / (f - 1.0);
    } else {
        rep.rate_estimate = 1.0;
        rep.extrapolated = 2.0 * rep.etas[k - 1] - rep.etas[k - 2];
    }
    if (!rep.monotone) rep.extrapolated = eta_last;

    ErgodicResult ref = evaluate_ergodic(spec, grid, rep.theta_used, player, v1, v2, x0,
                                         opts, nullptr);
    rep.rho = ref.sol.rho;
    double tr = rep.theta_used * rep.rho;
    rep.rel_to_theta_rho = std::abs(rep.extrapolated - tr) / std::max(std::abs(tr), 1e-12);
    rep.rel_to_rho =
        std::abs(rep.extrapolated - rep.rho) / std::max(std::abs(rep.rho), 1e-12);
    rep.normalization = rep.rel_to_theta_rho <= rep.rel_to_rho ? "theta*rho" : "rho";
    return rep;
}

}  // namespace rsgame
