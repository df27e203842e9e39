#pragma once

#include <optional>

#include "rsgame/fields.hpp"
#include "rsgame/generator.hpp"
#include "rsgame/grid.hpp"
#include "rsgame/hjb.hpp"
#include "rsgame/model.hpp"

namespace rsgame {

struct ErgodicSolution {
    double rho = 0.0;  // long-run risk-sensitive value (cost-rate units)
    Vec psi;           // positive, psi[x0] = 1
    long x0 = 0;
    int player = 1;
    double theta = 0.0;
};

struct ErgodicOptions {
    int max_outer = 100;
    int max_inner = 2000;
    double eig_resid_tol = 1e-8;
    double bound_slack = 0.1;   // slack for the W-envelope checks
    bool enforce_bounds = true; // only meaningful when a certificate is supplied
};

struct ErgodicResult {
    ErgodicSolution sol;
    StrategyField selector;  // stationary
    int outer_iterations = 0;
    bool cycled = false;     // selector cycling: best-residual iterate returned
    double eig_residual = 0.0;
    double policy_residual = 0.0;  // nonlinear inf-form defect, relative
};

/// Node mask of C0 = { W > 1 + c/delta }.
std::vector<char> c0_mask(const LyapunovCertificate& cert, const Grid& grid);
/// Default anchor: the grid node maximizing W.
long default_anchor(const LyapunovCertificate& cert, const Grid& grid);

/// Best response in the long-run game: policy iteration where each inner step
/// solves the linear principal-eigenvalue problem (Q_v + theta r_v) psi =
/// theta rho psi by inverse power iteration with shift theta|r| + 1,
/// renormalizing psi(x0) = 1.
ErgodicResult solve_ergodic_br(const GameSpec& spec, const Grid& grid, double theta,
                               int player, const StrategyField& opponent, long x0,
                               const ErgodicOptions& opts = {},
                               const LyapunovCertificate* cert = nullptr);

/// Evaluation mode: both strategies fixed, single linear eigensolve.
ErgodicResult evaluate_ergodic(const GameSpec& spec, const Grid& grid, double theta,
                               int player, const StrategyField& v1,
                               const StrategyField& v2, long x0,
                               const ErgodicOptions& opts = {},
                               const LyapunovCertificate* cert = nullptr);

struct ErgodicNashOptions {
    double strat_tol = 1e-4;
    double resid_tol = 1e-3;
    int max_iter = 200;
    bool harmonic = false;  // beta_m = 1/(m+1) instead of constant
    double beta = 0.5;
    ErgodicOptions inner;
};

struct ErgodicNashReport {
    StrategyField s1, s2;
    ErgodicSolution sol1, sol2;
    int iterations = 0;
    double change = 0.0;
    double resid1 = 0.0, resid2 = 0.0;
    bool converged = false;
};

ErgodicNashReport nash_iterate_ergodic(const GameSpec& spec, const Grid& grid,
                                       double theta, long x0,
                                       const StrategyField& init1,
                                       const StrategyField& init2,
                                       const ErgodicNashOptions& opts = {},
                                       const LyapunovCertificate* cert = nullptr);

struct VanishingDiscountReport {
    std::vector<double> alphas;
    std::vector<double> etas;     // core-averaged eta_alpha at the target level
    double extrapolated = 0.0;
    double rate_estimate = 0.0;   // fitted order of the alpha -> 0 sequence
    double theta_used = 0.0;
    double rho = 0.0;             // eigen-solver reference
    double rel_to_theta_rho = 0.0;
    double rel_to_rho = 0.0;
    bool monotone = true;
    std::string normalization;    // which scaling the data supports
};

/// eta_alpha(theta, x) = alpha * theta * d(log psi)/d(theta), core-averaged,
/// extrapolated over a decreasing alpha list and compared against the
/// eigen-solver value under both candidate normalizations.
VanishingDiscountReport vanishing_discount_check(
    const GameSpec& spec, const Grid& grid, const ThetaGrid& tg, double theta,
    int player, const StrategyField& v1, const StrategyField& v2,
    const std::vector<double>& alphas, long x0, const ErgodicOptions& opts = {});

}  // namespace rsgame
