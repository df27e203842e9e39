#include "rsgame/hjb.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>

namespace rsgame {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Solver = Eigen::SparseLU<SpMat>;

struct Workspace {
    const GameSpec* spec;
    const Grid* grid;
    int player;
    GeneratorParts parts;
    std::vector<Vec> c_own;    // [own action][node]
    std::vector<Vec> c_cross;  // [opponent action][node]

    const std::vector<StencilMatrix>& own_drift() const {
        return player == 1 ? parts.drift1 : parts.drift2;
    }
    const std::vector<StencilMatrix>& opp_drift() const {
        return player == 1 ? parts.drift2 : parts.drift1;
    }
    int m_own() const { return player == 1 ? spec->m1 : spec->m2; }
    int m_opp() const { return player == 1 ? spec->m2 : spec->m1; }
};

Workspace make_workspace(const GameSpec& spec, const Grid& grid, int player) {
    Workspace ws;
    ws.spec = &spec;
    ws.grid = &grid;
    ws.player = player;
    ws.parts = GeneratorParts::build(spec, grid);
    const ScalarTerm& own = spec.own_cost(player);
    const ScalarTerm& cross = spec.cross_cost(player);
    long n = grid.size();
    double x[kMaxDim];
    ws.c_own.assign(own.actions, Vec(n));
    for (int u = 0; u < own.actions; ++u)
        for (long i = 0; i < n; ++i) {
            grid.node(i, x);
            ws.c_own[u][i] = own.eval(x, u);
        }
    ws.c_cross.assign(cross.actions, Vec(n));
    for (int u = 0; u < cross.actions; ++u)
        for (long i = 0; i < n; ++i) {
            grid.node(i, x);
            ws.c_cross[u][i] = cross.eval(x, u);
        }
    return ws;
}

Vec mixed_cross_cost(const Workspace& ws, const StrategyField& opp, int level) {
    long n = ws.grid->size();
    Vec r(n, 0.0);
    for (int u = 0; u < ws.m_opp(); ++u)
        for (long i = 0; i < n; ++i) r[i] += opp.weight(level, i, u) * ws.c_cross[u][i];
    return r;
}

StencilMatrix opp_mixed_part(const Workspace& ws, const StrategyField& opp, int level) {
    // diffusion + the opponent's affinely mixed drift stencil
    StencilMatrix f = ws.parts.diffusion;
    long n = ws.grid->size();
    Vec w(n);
    const auto& B = ws.opp_drift();
    for (int u = 0; u < ws.m_opp(); ++u) {
        for (long i = 0; i < n; ++i) w[i] = opp.weight(level, i, u);
        f.add_row_scaled(B[u], w.data());
    }
    return f;
}

// argmin over own pure actions of (B_u psi)_i + theta (c_own_u + r_cross) psi_i
std::vector<int> improve_selector(const Workspace& ws, const Vec& psi, double theta,
                                  const Vec& r_cross) {
    long n = ws.grid->size();
    int m = ws.m_own();
    const auto& B = ws.own_drift();
    std::vector<Vec> f(m);
    for (int u = 0; u < m; ++u) {
        B[u].apply(psi, f[u]);
        Vec& fu = f[u];
        const Vec& cu = ws.c_own[u];
#pragma omp parallel for schedule(static)
        for (long i = 0; i < n; ++i) fu[i] += theta * (cu[i] + r_cross[i]) * psi[i];
    }
    std::vector<int> sel(n, 0);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
        int best = 0;
        double bv = f[0][i];
        for (int u = 1; u < m; ++u)
            if (f[u][i] < bv) {
                bv = f[u][i];
                best = u;
            }
        sel[i] = best;
    }
    return sel;
}

StencilMatrix compose_selected(const StencilMatrix& fixed_part,
                               const std::vector<StencilMatrix>& B,
                               const std::vector<int>& sel) {
    StencilMatrix s = fixed_part;
    for (long i = 0; i < s.n; ++i) {
        const StencilMatrix& b = B[sel[i]];
        for (int a = 0; a < s.dim; ++a) {
            s.lower[a][i] += b.lower[a][i];
            s.upper[a][i] += b.upper[a][i];
        }
        s.diag[i] += b.diag[i];
    }
    return s;
}

Vec solve_level(Solver& lu, const SpMat& M, const Vec& rhs, bool refactor) {
    if (refactor) {
        lu.compute(M);
        if (lu.info() != Eigen::Success)
            throw NumericalError("level solve: sparse factorization failed");
    }
    Eigen::Map<const Eigen::VectorXd> b(rhs.data(), rhs.size());
    Eigen::VectorXd x = lu.solve(b);
    if (lu.info() != Eigen::Success)
        throw NumericalError("level solve: back substitution failed");
    return Vec(x.data(), x.data() + x.size());
}

Vec exp_cost_factor(const Vec& r, double scale) {
    Vec e(r.size());
    for (size_t i = 0; i < r.size(); ++i) e[i] = std::exp(scale * r[i]);
    return e;
}

}  // namespace

DiscountedSolve solve_discounted(const GameSpec& spec, const Grid& grid,
                                 const ThetaGrid& tg, double alpha, int player,
                                 const StrategyField& opponent, const HjbOptions& opts) {
    if (alpha <= 0.0) throw ConfigError("solve_discounted: alpha must be positive");
    opponent.validate();
    if (opponent.nodes() != grid.size())
        throw ConfigError("solve_discounted: opponent field does not match grid");
    Workspace ws = make_workspace(spec, grid, player);
    long n = grid.size();
    int nl = tg.n_levels();
    double r_sup = spec.cost_sup(player, grid);

    ValueField vf;
    vf.player = player;
    vf.alpha = alpha;
    vf.n_nodes = n;
    vf.levels.assign(nl, Vec(n));
    std::vector<std::vector<int>> sel(nl);

    // kappa floor level
    std::fill(vf.levels[0].begin(), vf.levels[0].end(),
              std::exp(tg.kappa() * r_sup / alpha));
    {
        int lvl0 = opponent.stationary() ? 0 : 0;
        Vec rc = mixed_cross_cost(ws, opponent, lvl0);
        sel[0] = improve_selector(ws, vf.levels[0], tg.kappa(), rc);
    }

    double cq = tg.ds() / alpha;
    Solver lu;
    bool opp_stationary = opponent.stationary();
    StencilMatrix fixed = opp_mixed_part(ws, opponent, 0);
    Vec r_cross = mixed_cross_cost(ws, opponent, 0);

    for (int j = 0; j + 1 < nl; ++j) {
        int lvl = j + 1;
        double theta = tg.node(lvl);
        if (!opp_stationary) {
            fixed = opp_mixed_part(ws, opponent, lvl);
            r_cross = mixed_cross_cost(ws, opponent, lvl);
        }
        double cost_scale = tg.dtheta(j) / alpha;

        std::vector<int> pi = sel[j];
        Vec psi_new;
        bool done = false;
        for (int it = 0; it < opts.max_policy_iter; ++it) {
            Vec r_full(n);
            for (long i = 0; i < n; ++i) r_full[i] = ws.c_own[pi[i]][i] + r_cross[i];
            Vec rhs(n);
            for (long i = 0; i < n; ++i)
                rhs[i] = std::exp(cost_scale * r_full[i]) * vf.levels[j][i];
            StencilMatrix Q = compose_selected(fixed, ws.own_drift(), pi);
            SpMat M = assemble_system(Q, 1.0, cq, nullptr, 0.0);
            psi_new = solve_level(lu, M, rhs, true);
            std::vector<int> pi_next = improve_selector(ws, psi_new, theta, r_cross);
            if (pi_next == pi) {
                done = true;
                break;
            }
            pi = std::move(pi_next);
        }
        if (!done) {
            // report a witness node for diagnosis
            throw NumericalError("policy iteration did not stabilize at theta level " +
                                 std::to_string(lvl) + " (theta = " + format_g17(theta) +
                                 ")");
        }
        vf.levels[lvl] = std::move(psi_new);
        sel[lvl] = std::move(pi);
    }

    if (opts.enforce_invariants)
        require_value_invariants(vf, tg, r_sup, opts.bound_slack, opts.mono_slack);

    DiscountedSolve out{std::move(vf), selectors_to_field(sel, ws.m_own())};
    return out;
}

ValueField evaluate_discounted(const GameSpec& spec, const Grid& grid,
                               const ThetaGrid& tg, double alpha, int player,
                               const StrategyField& v1, const StrategyField& v2,
                               const HjbOptions& opts) {
    if (alpha <= 0.0) throw ConfigError("evaluate_discounted: alpha must be positive");
    v1.validate();
    v2.validate();
    const StrategyField& own = (player == 1) ? v1 : v2;
    const StrategyField& opp = (player == 1) ? v2 : v1;
    Workspace ws = make_workspace(spec, grid, player);
    long n = grid.size();
    int nl = tg.n_levels();
    double r_sup = spec.cost_sup(player, grid);

    ValueField vf;
    vf.player = player;
    vf.alpha = alpha;
    vf.n_nodes = n;
    vf.levels.assign(nl, Vec(n));
    std::fill(vf.levels[0].begin(), vf.levels[0].end(),
              std::exp(tg.kappa() * r_sup / alpha));

    double cq = tg.ds() / alpha;
    bool both_stationary = own.stationary() && opp.stationary();
    Solver lu;
    bool factored = false;

    for (int j = 0; j + 1 < nl; ++j) {
        int lvl = j + 1;
        StencilMatrix fixed = opp_mixed_part(ws, opp, lvl);
        Vec w(n);
        const auto& Bown = ws.own_drift();
        for (int u = 0; u < ws.m_own(); ++u) {
            for (long i = 0; i < n; ++i) w[i] = own.weight(lvl, i, u);
            fixed.add_row_scaled(Bown[u], w.data());
        }
        Vec r_mix = mixed_cross_cost(ws, opp, lvl);
        for (int u = 0; u < ws.m_own(); ++u)
            for (long i = 0; i < n; ++i)
                r_mix[i] += own.weight(lvl, i, u) * ws.c_own[u][i];

        Vec rhs(n);
        double cost_scale = tg.dtheta(j) / alpha;
        for (long i = 0; i < n; ++i)
            rhs[i] = std::exp(cost_scale * r_mix[i]) * vf.levels[j][i];

        if (!both_stationary || !factored) {
            SpMat M = assemble_system(fixed, 1.0, cq, nullptr, 0.0);
            vf.levels[lvl] = solve_level(lu, M, rhs, true);
            factored = true;
        } else {
            vf.levels[lvl] = solve_level(lu, SpMat(), rhs, false);
        }
    }

    if (opts.enforce_invariants)
        require_value_invariants(vf, tg, r_sup, opts.bound_slack, opts.mono_slack);
    return vf;
}

std::vector<int> minimizing_selector(const GameSpec& spec, const Grid& grid,
                                     const Vec& psi_level, double theta, int player,
                                     const StrategyField& opponent, int opp_level) {
    for (double v : psi_level)
        if (!(v > 0.0) || !std::isfinite(v))
            throw NumericalError("minimizing_selector: value level must be finite and positive");
    Workspace ws = make_workspace(spec, grid, player);
    Vec rc = mixed_cross_cost(ws, opponent, opp_level);
    return improve_selector(ws, psi_level, theta, rc);
}

StrategyField selectors_to_field(const std::vector<std::vector<int>>& sel, int actions) {
    int nl = static_cast<int>(sel.size());
    long n = static_cast<long>(sel[0].size());
    StrategyField f(actions, n, nl);
    for (int j = 0; j < nl; ++j)
        for (long i = 0; i < n; ++i) f.set_dirac(j, i, sel[j][i]);
    return f;
}

CoupledDefect discounted_residual(const GameSpec& spec, const Grid& grid,
                                  const ThetaGrid& tg, double alpha, int player,
                                  const ValueField& psi, const StrategyField& own,
                                  const StrategyField& opponent) {
    Workspace ws = make_workspace(spec, grid, player);
    long n = grid.size();
    double cq = tg.ds() / alpha;
    CoupledDefect d;
    const auto& Bown = ws.own_drift();
    int m = ws.m_own();

    for (int j = 0; j + 1 < static_cast<int>(psi.levels.size()); ++j) {
        int lvl = j + 1;
        StencilMatrix fixed = opp_mixed_part(ws, opponent, lvl);
        Vec r_cross = mixed_cross_cost(ws, opponent, lvl);
        const Vec& pj = psi.levels[j];
        const Vec& pj1 = psi.levels[lvl];
        double scale = sup_abs(pj1);
        double cost_scale = tg.dtheta(j) / alpha;

        Vec base;
        fixed.apply(pj1, base);  // (D + B_opp) psi_{j+1}

        // per-action defect of the level relation M_u psi_{j+1} = E_u psi_j
        std::vector<Vec> own_apply(m);
        std::vector<Vec> defect(m, Vec(n));
        for (int u = 0; u < m; ++u) {
            Bown[u].apply(pj1, own_apply[u]);
            for (long i = 0; i < n; ++i) {
                double Mpsi = pj1[i] - cq * (base[i] + own_apply[u][i]);
                double Epsi =
                    std::exp(cost_scale * (ws.c_own[u][i] + r_cross[i])) * pj[i];
                defect[u][i] = Mpsi - Epsi;
            }
        }
        for (long i = 0; i < n; ++i) {
            const double* wown = own.at(lvl, i);
            double mn = defect[0][i];
            double bmix = 0.0, rmix = r_cross[i];
            for (int u = 0; u < m; ++u) {
                mn = std::min(mn, defect[u][i]);
                bmix += wown[u] * own_apply[u][i];
                rmix += wown[u] * ws.c_own[u][i];
            }
            // defect of the mixed-evaluation step at the given own strategy
            double attain = pj1[i] - cq * (base[i] + bmix) -
                            std::exp(cost_scale * rmix) * pj[i];
            d.inf_form = std::max(d.inf_form, std::max(0.0, -mn) / scale);
            d.attainment = std::max(d.attainment, std::abs(attain) / scale);
        }
    }
    return d;
}

}  // namespace rsgame
