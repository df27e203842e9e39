#pragma once

#include "rsgame/fields.hpp"
#include "rsgame/generator.hpp"

namespace rsgame {

/// Small discrete-chain surrogate of the game: per-pure-pair transition
/// matrices (from extract_chain) plus stage costs sampled at the nodes.
/// Deliberately shares no numerical kernels with the PDE solvers.
struct ChainGame {
    long n = 0;
    int m1 = 1, m2 = 1;
    double dt = 0.1;
    std::vector<DenseMat> P;   // [u1*m2+u2]
    std::vector<Vec> r1_own;   // [u1][x]  cost parts of player 1
    std::vector<Vec> r1_opp;   // [u2][x]
    std::vector<Vec> r2_own;   // [u2][x]
    std::vector<Vec> r2_opp;   // [u1][x]

    const DenseMat& at(int u1, int u2) const { return P[u1 * m2 + u2]; }

    static ChainGame from_grid(const GameSpec& spec, const Grid& grid, double dt,
                               long max_states = 50);

    // strategy-mixed transition matrix and player-k stage cost
    DenseMat mixed_P(const StrategyField& v1, const StrategyField& v2) const;
    Vec mixed_cost(int player, const StrategyField& v1, const StrategyField& v2) const;
    bool irreducible(const DenseMat& P_mixed) const;
};

/// Backward multiplicative value iteration for the kappa-truncated discounted
/// criterion at risk level theta: terminal value e^{kappa*|r|/alpha}, horizon
/// T_kappa = log(theta/kappa)/alpha, per-step exact discount weights.
Vec vi_discounted(const ChainGame& chain, double theta, double alpha, int player,
                  const StrategyField& v1, const StrategyField& v2, double kappa,
                  double r_sup, double dt_step = 0.0);

struct PerronResult {
    double rho = 0.0;
    double lambda = 0.0;  // Perron root of the twisted kernel
    Vec eigvec;           // normalized at the anchor state
    int iterations = 0;
};

/// Power iteration on the twisted kernel K(x,y) = e^{theta r(x) dt} P(x,y);
/// rho = log(lambda)/(theta dt).
PerronResult perron_ergodic(const ChainGame& chain, double theta, int player,
                            const StrategyField& v1, const StrategyField& v2,
                            long anchor = 0);

/// Stationary distribution of the mixed chain (dense linear solve).
Vec stationary_distribution(const ChainGame& chain, const StrategyField& v1,
                            const StrategyField& v2);

}  // namespace rsgame
