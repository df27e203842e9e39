#pragma once

#include <Eigen/SparseCore>

#include "rsgame/grid.hpp"
#include "rsgame/model.hpp"

namespace rsgame {

/// Sparse row-stencil operator on the lattice: out = diag*psi + sum over axes
/// of lower/upper neighbor contributions. Off-diagonals are nonnegative and
/// rows sum to zero (reflecting boundary contributions are folded onto the
/// interior neighbor at build time, so zero coefficients mark missing
/// neighbors).
struct StencilMatrix {
    int dim = 1;
    long n = 0;
    std::array<long, kMaxDim> stride{};
    Vec diag;
    std::array<Vec, kMaxDim> lower, upper;

    static StencilMatrix zeros(const Grid& grid);

    void add_scaled(const StencilMatrix& other, double w);
    // Row-local mixing: row i of `other` enters with weight w[i].
    void add_row_scaled(const StencilMatrix& other, const double* w_per_node);
    void rebuild_diag();  // diag_i = -sum of off-diagonals in row i

    void apply(const Vec& psi, Vec& out) const;          // parallel kernel
    void apply_serial(const Vec& psi, Vec& out) const;   // reference kept for tests
    double row_apply(const Vec& psi, long i) const;

    double max_abs_diag() const;
    /// Throws NumericalError when the monotone-scheme invariants fail.
    void check_invariants(double tol = 1e-12) const;
};

StencilMatrix build_diffusion_stencil(const GameSpec& spec, const Grid& grid);
StencilMatrix build_drift_stencil(const VectorTerm& drift, const Grid& grid, int action);

/// Discrete generator at a pure action pair (diffusion + both drift terms).
StencilMatrix build_generator(const GameSpec& spec, const Grid& grid, int u1, int u2);

/// Per-action drift stencils for one player, plus the shared diffusion.
struct GeneratorParts {
    StencilMatrix diffusion;
    std::vector<StencilMatrix> drift1;  // per player-1 action
    std::vector<StencilMatrix> drift2;  // per player-2 action
    static GeneratorParts build(const GameSpec& spec, const Grid& grid);
};

class StrategyField;  // fields.hpp

/// Affine mixture of the per-pure-pair generators by strategy weights
/// (equivalently: diffusion + per-player affine mixtures of the per-action
/// drift stencils; the double sum collapses by additivity).
StencilMatrix mixed_stencil(const GeneratorParts& parts, const StrategyField& v1,
                            const StrategyField& v2, int level);
Vec mixed_generator_apply(const GameSpec& spec, const Grid& grid,
                          const StrategyField& v1, const StrategyField& v2,
                          int level, const Vec& psi);

/// Row-major dense transition matrix (oracle support).
struct DenseMat {
    long n = 0;
    Vec a;
    double& at(long i, long j) { return a[i * n + j]; }
    double at(long i, long j) const { return a[i * n + j]; }
};

/// P = I + dt*Q; rejects dt above the positivity bound 1/max|diag|.
DenseMat extract_chain(const StencilMatrix& gen, double dt);

/// M = c_I*I - c_Q*Q - c_D*diag(extra); extra may be null.
Eigen::SparseMatrix<double> assemble_system(const StencilMatrix& Q, double c_I,
                                            double c_Q, const Vec* extra,
                                            double c_D);

}  // namespace rsgame
