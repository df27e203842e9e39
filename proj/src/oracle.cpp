#include "rsgame/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace rsgame {

ChainGame ChainGame::from_grid(const GameSpec& spec, const Grid& grid, double dt,
                               long max_states) {
    if (grid.size() > max_states)
        throw ConfigError("chain game: grid has more states than the oracle cap");
    ChainGame c;
    c.n = grid.size();
    c.m1 = spec.m1;
    c.m2 = spec.m2;
    c.dt = dt;
    c.P.reserve(spec.m1 * spec.m2);
    for (int u1 = 0; u1 < spec.m1; ++u1)
        for (int u2 = 0; u2 < spec.m2; ++u2) {
            StencilMatrix q = build_generator(spec, grid, u1, u2);
            c.P.push_back(extract_chain(q, dt));
        }
    double x[kMaxDim];
    c.r1_own.assign(spec.m1, Vec(c.n));
    c.r2_opp.assign(spec.m1, Vec(c.n));
    for (int u = 0; u < spec.m1; ++u)
        for (long i = 0; i < c.n; ++i) {
            grid.node(i, x);
            c.r1_own[u][i] = spec.cost11.eval(x, u);
            c.r2_opp[u][i] = spec.cost21.eval(x, u);
        }
    c.r1_opp.assign(spec.m2, Vec(c.n));
    c.r2_own.assign(spec.m2, Vec(c.n));
    for (int u = 0; u < spec.m2; ++u)
        for (long i = 0; i < c.n; ++i) {
            grid.node(i, x);
            c.r1_opp[u][i] = spec.cost12.eval(x, u);
            c.r2_own[u][i] = spec.cost22.eval(x, u);
        }
    return c;
}

DenseMat ChainGame::mixed_P(const StrategyField& v1, const StrategyField& v2) const {
    DenseMat M;
    M.n = n;
    M.a.assign(n * n, 0.0);
    for (int u1 = 0; u1 < m1; ++u1)
        for (int u2 = 0; u2 < m2; ++u2) {
            const DenseMat& p = at(u1, u2);
            for (long i = 0; i < n; ++i) {
                double w = v1.weight(0, i, u1) * v2.weight(0, i, u2);
                if (w == 0.0) continue;
                for (long j = 0; j < n; ++j) M.a[i * n + j] += w * p.at(i, j);
            }
        }
    return M;
}

Vec ChainGame::mixed_cost(int player, const StrategyField& v1,
                          const StrategyField& v2) const {
    Vec r(n, 0.0);
    if (player == 1) {
        for (int u = 0; u < m1; ++u)
            for (long i = 0; i < n; ++i) r[i] += v1.weight(0, i, u) * r1_own[u][i];
        for (int u = 0; u < m2; ++u)
            for (long i = 0; i < n; ++i) r[i] += v2.weight(0, i, u) * r1_opp[u][i];
    } else {
        for (int u = 0; u < m2; ++u)
            for (long i = 0; i < n; ++i) r[i] += v2.weight(0, i, u) * r2_own[u][i];
        for (int u = 0; u < m1; ++u)
            for (long i = 0; i < n; ++i) r[i] += v1.weight(0, i, u) * r2_opp[u][i];
    }
    return r;
}

bool ChainGame::irreducible(const DenseMat& P_mixed) const {
    auto reach = [&](bool transpose) {
        std::vector<char> seen(n, 0);
        std::deque<long> q{0};
        seen[0] = 1;
        while (!q.empty()) {
            long i = q.front();
            q.pop_front();
            for (long j = 0; j < n; ++j) {
                double p = transpose ? P_mixed.at(j, i) : P_mixed.at(i, j);
                if (p > 0.0 && !seen[j]) {
                    seen[j] = 1;
                    q.push_back(j);
                }
            }
        }
        return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
    };
    return reach(false) && reach(true);
}

Vec vi_discounted(const ChainGame& chain, double theta, double alpha, int player,
                  const StrategyField& v1, const StrategyField& v2, double kappa,
                  double r_sup, double dt_step) {
    if (!(kappa > 0.0) || !(kappa < theta))
        throw ConfigError("vi_discounted: need 0 < kappa < theta");
    double dt = dt_step > 0.0 ? dt_step : chain.dt;
    double T_kappa = std::log(theta / kappa) / alpha;
    long steps = std::max<long>(1, std::lround(std::ceil(T_kappa / dt)));
    dt = T_kappa / static_cast<double>(steps);

    DenseMat P = chain.mixed_P(v1, v2);
    Vec r = chain.mixed_cost(player, v1, v2);
    long n = chain.n;

    Vec V(n, std::exp(kappa * r_sup / alpha));
    Vec next(n);
    for (long s = steps - 1; s >= 0; --s) {
        double t0 = dt * static_cast<double>(s);
        double t1 = dt * static_cast<double>(s + 1);
        // exact integral of the discount weight over the step
        double w = theta * (std::exp(-alpha * t0) - std::exp(-alpha * t1)) / alpha;
        for (long i = 0; i < n; ++i) {
            double acc = 0.0;
            for (long j = 0; j < n; ++j) acc += P.at(i, j) * V[j];
            next[i] = std::exp(w * r[i]) * acc;
        }
        V.swap(next);
    }
    return V;
}

PerronResult perron_ergodic(const ChainGame& chain, double theta, int player,
                            const StrategyField& v1, const StrategyField& v2,
                            long anchor) {
    DenseMat P = chain.mixed_P(v1, v2);
    if (!chain.irreducible(P))
        throw NumericalError("perron_ergodic: mixed chain is reducible");
    Vec r = chain.mixed_cost(player, v1, v2);
    long n = chain.n;
    double dt = chain.dt;

    // twisted kernel K(x,y) = e^{theta r(x) dt} P(x,y)
    Vec twist(n);
    for (long i = 0; i < n; ++i) twist[i] = std::exp(theta * r[i] * dt);

    Vec w(n, 1.0), next(n);
    double lambda = 1.0;
    int it = 0;
    const int max_it = 200000;
    for (; it < max_it; ++it) {
        for (long i = 0; i < n; ++i) {
            double acc = 0.0;
            for (long j = 0; j < n; ++j) acc += P.at(i, j) * w[j];
            next[i] = twist[i] * acc;
        }
        double nl = next[anchor];
        for (long i = 0; i < n; ++i) next[i] /= nl;
        double diff = 0.0;
        for (long i = 0; i < n; ++i) diff = std::max(diff, std::abs(next[i] - w[i]));
        w.swap(next);
        lambda = nl;
        if (diff < 1e-14) break;
    }
    PerronResult res;
    res.lambda = lambda;
    res.rho = std::log(lambda) / (theta * dt);
    res.eigvec = std::move(w);
    res.iterations = it + 1;
    return res;
}

Vec stationary_distribution(const ChainGame& chain, const StrategyField& v1,
                            const StrategyField& v2) {
    DenseMat P = chain.mixed_P(v1, v2);
    long n = chain.n;
    // solve pi (P - I) = 0 with sum(pi) = 1 by dense elimination on the
    // transposed system, replacing the last equation by the normalization
    std::vector<Vec> A(n, Vec(n + 1, 0.0));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) A[i][j] = P.at(j, i) - (i == j ? 1.0 : 0.0);
    for (long j = 0; j < n; ++j) A[n - 1][j] = 1.0;
    A[n - 1][n] = 1.0;
    // gaussian elimination with partial pivoting
    for (long c = 0; c < n; ++c) {
        long piv = c;
        for (long rr = c + 1; rr < n; ++rr)
            if (std::abs(A[rr][c]) > std::abs(A[piv][c])) piv = rr;
        std::swap(A[c], A[piv]);
        if (std::abs(A[c][c]) < 1e-300)
            throw NumericalError("stationary_distribution: singular system");
        for (long rr = 0; rr < n; ++rr) {
            if (rr == c) continue;
            double f = A[rr][c] / A[c][c];
            if (f == 0.0) continue;
            for (long cc = c; cc <= n; ++cc) A[rr][cc] -= f * A[c][cc];
        }
    }
    Vec pi(n);
    for (long i = 0; i < n; ++i) pi[i] = A[i][n] / A[i][i];
    return pi;
}

}  // namespace rsgame
