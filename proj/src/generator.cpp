#include "rsgame/generator.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rsgame/fields.hpp"

namespace rsgame {

StencilMatrix StencilMatrix::zeros(const Grid& grid) {
    StencilMatrix s;
    s.dim = grid.dim();
    s.n = grid.size();
    for (int a = 0; a < s.dim; ++a) {
        s.stride[a] = grid.stride(a);
        s.lower[a].assign(s.n, 0.0);
        s.upper[a].assign(s.n, 0.0);
    }
    s.diag.assign(s.n, 0.0);
    return s;
}

void StencilMatrix::add_scaled(const StencilMatrix& other, double w) {
    for (int a = 0; a < dim; ++a)
        for (long i = 0; i < n; ++i) {
            lower[a][i] += w * other.lower[a][i];
            upper[a][i] += w * other.upper[a][i];
        }
    for (long i = 0; i < n; ++i) diag[i] += w * other.diag[i];
}

void StencilMatrix::add_row_scaled(const StencilMatrix& other, const double* w) {
    for (int a = 0; a < dim; ++a)
        for (long i = 0; i < n; ++i) {
            lower[a][i] += w[i] * other.lower[a][i];
            upper[a][i] += w[i] * other.upper[a][i];
        }
    for (long i = 0; i < n; ++i) diag[i] += w[i] * other.diag[i];
}

void StencilMatrix::rebuild_diag() {
    for (long i = 0; i < n; ++i) {
        double s = 0.0;
        for (int a = 0; a < dim; ++a) s += lower[a][i] + upper[a][i];
        diag[i] = -s;
    }
}

double StencilMatrix::row_apply(const Vec& psi, long i) const {
    double s = diag[i] * psi[i];
    for (int a = 0; a < dim; ++a) {
        double lo = lower[a][i];
        if (lo != 0.0) s += lo * psi[i - stride[a]];
        double up = upper[a][i];
        if (up != 0.0) s += up * psi[i + stride[a]];
    }
    return s;
}

void StencilMatrix::apply_serial(const Vec& psi, Vec& out) const {
    out.resize(n);
    for (long i = 0; i < n; ++i) out[i] = row_apply(psi, i);
}

void StencilMatrix::apply(const Vec& psi, Vec& out) const {
    out.resize(n);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) out[i] = row_apply(psi, i);
}

double StencilMatrix::max_abs_diag() const {
    double m = 0.0;
    for (double d : diag) m = std::max(m, std::abs(d));
    return m;
}

void StencilMatrix::check_invariants(double tol) const {
    for (long i = 0; i < n; ++i) {
        double off = 0.0;
        for (int a = 0; a < dim; ++a) {
            if (lower[a][i] < -tol || upper[a][i] < -tol)
                throw NumericalError(
                    "generator: negative off-diagonal entry (monotonicity violated)");
            off += lower[a][i] + upper[a][i];
        }
        if (diag[i] > tol)
            throw NumericalError("generator: positive diagonal entry");
        if (std::abs(diag[i] + off) > tol * std::max(1.0, off))
            throw NumericalError("generator: row sum is not zero");
    }
}

StencilMatrix build_diffusion_stencil(const GameSpec& spec, const Grid& grid) {
    StencilMatrix s = StencilMatrix::zeros(grid);
    double x[kMaxDim], ad[kMaxDim];
    for (long i = 0; i < s.n; ++i) {
        grid.node(i, x);
        spec.sigma.a_diag(x, ad);  // throws for unsupported cross terms
        for (int a = 0; a < s.dim; ++a) {
            double c = 0.5 * ad[a] / (grid.dx(a) * grid.dx(a));
            int idx = grid.axis_index(i, a);
            if (idx == 0) {
                s.upper[a][i] += 2.0 * c;  // reflected ghost folds onto the interior side
            } else if (idx == grid.npts(a) - 1) {
                s.lower[a][i] += 2.0 * c;
            } else {
                s.lower[a][i] += c;
                s.upper[a][i] += c;
            }
        }
    }
    s.rebuild_diag();
    return s;
}

StencilMatrix build_drift_stencil(const VectorTerm& drift, const Grid& grid, int action) {
    StencilMatrix s = StencilMatrix::zeros(grid);
    double x[kMaxDim], b[kMaxDim];
    for (long i = 0; i < s.n; ++i) {
        grid.node(i, x);
        drift.eval(x, action, b);
        for (int a = 0; a < s.dim; ++a) {
            double bp = std::max(b[a], 0.0) / grid.dx(a);
            double bm = std::max(-b[a], 0.0) / grid.dx(a);
            int idx = grid.axis_index(i, a);
            if (idx == 0) {
                s.upper[a][i] += bp + bm;  // backward leg reflects to the upper neighbor
            } else if (idx == grid.npts(a) - 1) {
                s.lower[a][i] += bp + bm;
            } else {
                s.upper[a][i] += bp;
                s.lower[a][i] += bm;
            }
        }
    }
    s.rebuild_diag();
    return s;
}

StencilMatrix build_generator(const GameSpec& spec, const Grid& grid, int u1, int u2) {
    StencilMatrix s = build_diffusion_stencil(spec, grid);
    s.add_scaled(build_drift_stencil(spec.drift1, grid, u1), 1.0);
    s.add_scaled(build_drift_stencil(spec.drift2, grid, u2), 1.0);
    s.check_invariants();
    return s;
}

GeneratorParts GeneratorParts::build(const GameSpec& spec, const Grid& grid) {
    GeneratorParts p;
    p.diffusion = build_diffusion_stencil(spec, grid);
    p.drift1.reserve(spec.m1);
    for (int u = 0; u < spec.m1; ++u)
        p.drift1.push_back(build_drift_stencil(spec.drift1, grid, u));
    p.drift2.reserve(spec.m2);
    for (int u = 0; u < spec.m2; ++u)
        p.drift2.push_back(build_drift_stencil(spec.drift2, grid, u));
    return p;
}

StencilMatrix mixed_stencil(const GeneratorParts& parts, const StrategyField& v1,
                            const StrategyField& v2, int level) {
    const StencilMatrix& D = parts.diffusion;
    StencilMatrix s = D;  // copy
    long n = D.n;
    Vec w(n);
    for (size_t u = 0; u < parts.drift1.size(); ++u) {
        for (long i = 0; i < n; ++i) w[i] = v1.weight(level, i, static_cast<int>(u));
        s.add_row_scaled(parts.drift1[u], w.data());
    }
    for (size_t u = 0; u < parts.drift2.size(); ++u) {
        for (long i = 0; i < n; ++i) w[i] = v2.weight(level, i, static_cast<int>(u));
        s.add_row_scaled(parts.drift2[u], w.data());
    }
    return s;
}

Vec mixed_generator_apply(const GameSpec& spec, const Grid& grid,
                          const StrategyField& v1, const StrategyField& v2,
                          int level, const Vec& psi) {
    v1.validate();
    v2.validate();
    auto parts = GeneratorParts::build(spec, grid);
    StencilMatrix s = mixed_stencil(parts, v1, v2, level);
    Vec out;
    s.apply(psi, out);
    return out;
}

DenseMat extract_chain(const StencilMatrix& gen, double dt) {
    double bound = 1.0 / std::max(gen.max_abs_diag(), 1e-300);
    if (dt > bound * (1.0 + 1e-12))
        throw ConfigError("extract_chain: dt " + format_g17(dt) +
                          " exceeds the positivity bound " + format_g17(bound));
    DenseMat P;
    P.n = gen.n;
    P.a.assign(gen.n * gen.n, 0.0);
    for (long i = 0; i < gen.n; ++i) {
        P.at(i, i) = 1.0 + dt * gen.diag[i];
        for (int a = 0; a < gen.dim; ++a) {
            if (gen.lower[a][i] != 0.0) P.at(i, i - gen.stride[a]) += dt * gen.lower[a][i];
            if (gen.upper[a][i] != 0.0) P.at(i, i + gen.stride[a]) += dt * gen.upper[a][i];
        }
    }
    return P;
}

Eigen::SparseMatrix<double> assemble_system(const StencilMatrix& Q, double c_I,
                                            double c_Q, const Vec* extra, double c_D) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(Q.n * (2 * Q.dim + 1));
    for (long i = 0; i < Q.n; ++i) {
        double d = c_I - c_Q * Q.diag[i];
        if (extra) d -= c_D * (*extra)[i];
        trip.emplace_back(i, i, d);
        for (int a = 0; a < Q.dim; ++a) {
            if (Q.lower[a][i] != 0.0)
                trip.emplace_back(i, i - Q.stride[a], -c_Q * Q.lower[a][i]);
            if (Q.upper[a][i] != 0.0)
                trip.emplace_back(i, i + Q.stride[a], -c_Q * Q.upper[a][i]);
        }
    }
    Eigen::SparseMatrix<double> M(Q.n, Q.n);
    M.setFromTriplets(trip.begin(), trip.end());
    return M;
}

}  // namespace rsgame
