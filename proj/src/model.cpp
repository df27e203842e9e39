#include "rsgame/model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace rsgame {

namespace {

double sq(double v) { return v * v; }

// Distance from the box [-L,L]^d to a point (0 if inside).
double box_dist2(const double* c, const double* L, int dim) {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) {
        double d = std::max(0.0, std::abs(c[a]) - L[a]);
        s += d * d;
    }
    return s;
}

}  // namespace

ScalarTerm ScalarTerm::zero(int actions, int dim) {
    ScalarTerm t;
    t.kind = TermKind::Constant;
    t.actions = actions;
    t.dim = dim;
    t.value.assign(actions, 0.0);
    return t;
}

ScalarTerm ScalarTerm::constant(Vec values, int dim) {
    ScalarTerm t;
    t.kind = TermKind::Constant;
    t.actions = static_cast<int>(values.size());
    t.dim = dim;
    t.value = std::move(values);
    return t;
}

double ScalarTerm::eval(const double* x, int u) const {
    switch (kind) {
        case TermKind::Constant:
            return value[u];
        case TermKind::TanhAffine: {
            double s = value[u];
            for (int a = 0; a < dim; ++a) s += slope[u][a] * std::tanh(x[a]);
            return s;
        }
        case TermKind::GaussBump: {
            double d2 = 0.0;
            for (int a = 0; a < dim; ++a) d2 += sq(x[a] - center[a]);
            return value[u] * std::exp(-d2 / (2.0 * width * width));
        }
    }
    return 0.0;
}

double ScalarTerm::max_on_box(const double* L, int u) const {
    switch (kind) {
        case TermKind::Constant:
            return value[u];
        case TermKind::TanhAffine: {
            // monotone per coordinate: extremum at a corner with matching signs
            double s = value[u];
            for (int a = 0; a < dim; ++a) s += std::abs(slope[u][a]) * std::tanh(L[a]);
            return s;
        }
        case TermKind::GaussBump: {
            double d2 = box_dist2(center.data(), L, dim);
            double peak = value[u] * std::exp(-d2 / (2.0 * width * width));
            return value[u] >= 0.0 ? peak : 0.0;  // nonneg weight peaks at center
        }
    }
    return 0.0;
}

double ScalarTerm::min_on_box(const double* L, int u) const {
    switch (kind) {
        case TermKind::Constant:
            return value[u];
        case TermKind::TanhAffine: {
            double s = value[u];
            for (int a = 0; a < dim; ++a) s -= std::abs(slope[u][a]) * std::tanh(L[a]);
            return s;
        }
        case TermKind::GaussBump: {
            if (value[u] >= 0.0) {
                // farthest corner
                double d2 = 0.0;
                for (int a = 0; a < dim; ++a) d2 += sq(std::abs(center[a]) + L[a]);
                return value[u] * std::exp(-d2 / (2.0 * width * width));
            }
            double d2 = box_dist2(center.data(), L, dim);
            return value[u] * std::exp(-d2 / (2.0 * width * width));
        }
    }
    return 0.0;
}

double ScalarTerm::lipschitz_bound(int u) const {
    switch (kind) {
        case TermKind::Constant:
            return 0.0;
        case TermKind::TanhAffine: {
            double s = 0.0;
            for (int a = 0; a < dim; ++a) s += std::abs(slope[u][a]);
            return s;  // |tanh'| <= 1
        }
        case TermKind::GaussBump:
            // max |grad| of the bump is |p| / (w e^{1/2})
            return std::abs(value[u]) / (width * std::exp(0.5));
    }
    return 0.0;
}

void ScalarTerm::validate(const std::string& what, bool require_nonneg,
                          const double* box_L) const {
    if (actions < 1) throw ConfigError(what + ": needs at least one action");
    if (static_cast<int>(value.size()) != actions)
        throw ConfigError(what + ": coefficient count does not match action count");
    if (kind == TermKind::TanhAffine) {
        if (static_cast<int>(slope.size()) != actions)
            throw ConfigError(what + ": slope rows must match action count");
        for (const auto& s : slope)
            if (static_cast<int>(s.size()) != dim)
                throw ConfigError(what + ": slope length must match dimension");
    }
    if (kind == TermKind::GaussBump) {
        if (static_cast<int>(center.size()) != dim)
            throw ConfigError(what + ": gauss center length must match dimension");
        if (!(width > 0.0)) throw ConfigError(what + ": gauss width must be positive");
    }
    if (require_nonneg) {
        for (int u = 0; u < actions; ++u) {
            if (min_on_box(box_L, u) < -1e-12)
                throw ConfigError(what + ": cost term can reach negative values");
        }
    }
}

VectorTerm VectorTerm::zero(int actions, int dim) {
    VectorTerm t;
    t.kind = TermKind::Constant;
    t.actions = actions;
    t.dim = dim;
    t.value.assign(actions, Vec(dim, 0.0));
    return t;
}

void VectorTerm::eval(const double* x, int u, double* out) const {
    switch (kind) {
        case TermKind::Constant:
            for (int a = 0; a < dim; ++a) out[a] = value[u][a];
            return;
        case TermKind::TanhAffine:
            for (int a = 0; a < dim; ++a) {
                double s = value[u][a];
                for (int b = 0; b < dim; ++b) s += slope[u][a][b] * std::tanh(x[b]);
                out[a] = s;
            }
            return;
        case TermKind::GaussBump: {
            double d2 = 0.0;
            for (int a = 0; a < dim; ++a) d2 += sq(x[a] - center[a]);
            double g = std::exp(-d2 / (2.0 * width * width));
            for (int a = 0; a < dim; ++a) out[a] = value[u][a] * g;
            return;
        }
    }
}

double VectorTerm::component_max_abs(const double* L, int u, int comp) const {
    switch (kind) {
        case TermKind::Constant:
            return std::abs(value[u][comp]);
        case TermKind::TanhAffine: {
            double s = std::abs(value[u][comp]);
            for (int b = 0; b < dim; ++b)
                s += std::abs(slope[u][comp][b]) * std::tanh(L[b]);
            return s;
        }
        case TermKind::GaussBump:
            return std::abs(value[u][comp]);
    }
    return 0.0;
}

double VectorTerm::sup_norm(const double* L) const {
    double m = 0.0;
    for (int u = 0; u < actions; ++u)
        for (int a = 0; a < dim; ++a) m = std::max(m, component_max_abs(L, u, a));
    return m;
}

double VectorTerm::lipschitz_bound(int u) const {
    switch (kind) {
        case TermKind::Constant:
            return 0.0;
        case TermKind::TanhAffine: {
            double s = 0.0;
            for (int a = 0; a < dim; ++a)
                for (int b = 0; b < dim; ++b) s += sq(slope[u][a][b]);
            return std::sqrt(s);
        }
        case TermKind::GaussBump: {
            double s = 0.0;
            for (int a = 0; a < dim; ++a) s += sq(value[u][a]);
            return std::sqrt(s) / (width * std::exp(0.5));
        }
    }
    return 0.0;
}

void VectorTerm::validate(const std::string& what) const {
    if (actions < 1) throw ConfigError(what + ": needs at least one action");
    if (static_cast<int>(value.size()) != actions)
        throw ConfigError(what + ": coefficient rows must match action count");
    for (const auto& v : value)
        if (static_cast<int>(v.size()) != dim)
            throw ConfigError(what + ": coefficient length must match dimension");
    if (kind == TermKind::TanhAffine) {
        if (static_cast<int>(slope.size()) != actions)
            throw ConfigError(what + ": slope tensor must match action count");
        for (const auto& m : slope) {
            if (static_cast<int>(m.size()) != dim)
                throw ConfigError(what + ": slope tensor shape mismatch");
            for (const auto& row : m)
                if (static_cast<int>(row.size()) != dim)
                    throw ConfigError(what + ": slope tensor shape mismatch");
        }
    }
    if (kind == TermKind::GaussBump) {
        if (static_cast<int>(center.size()) != dim)
            throw ConfigError(what + ": gauss center length must match dimension");
        if (!(width > 0.0)) throw ConfigError(what + ": gauss width must be positive");
    }
}

void DiffusionSpec::sigma_at(const double* x, double* out) const {
    if (kind == Kind::ConstantMatrix) {
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) out[i * dim + j] = matrix[i][j];
    } else {
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                out[i * dim + j] = (i == j) ? base[i] + amp[i] * std::tanh(x[i]) : 0.0;
    }
}

bool DiffusionSpec::a_is_diagonal() const {
    if (kind == Kind::DiagTanh || dim == 1) return true;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            if (i == j) continue;
            // off-diagonal of sigma sigma^T
            double s = 0.0;
            for (int k = 0; k < dim; ++k) s += matrix[i][k] * matrix[j][k];
            if (std::abs(s) > 1e-14) return false;
        }
    return true;
}

void DiffusionSpec::a_diag(const double* x, double* out) const {
    if (kind == Kind::DiagTanh) {
        for (int i = 0; i < dim; ++i) out[i] = sq(base[i] + amp[i] * std::tanh(x[i]));
        return;
    }
    if (!a_is_diagonal())
        throw NumericalError(
            "diffusion: a(x) has nonzero off-diagonal entries; cross-derivative "
            "stencils are not supported (monotonicity would be lost)");
    for (int i = 0; i < dim; ++i) {
        double s = 0.0;
        for (int k = 0; k < dim; ++k) s += matrix[i][k] * matrix[i][k];
        out[i] = s;
    }
}

double DiffusionSpec::a_min_eig(const double* x) const {
    if (kind == Kind::DiagTanh) {
        double m = sq(base[0] + amp[0] * std::tanh(x[0]));
        for (int i = 1; i < dim; ++i) m = std::min(m, sq(base[i] + amp[i] * std::tanh(x[i])));
        return m;
    }
    if (dim == 1) return sq(matrix[0][0]);
    // 2x2 symmetric a = sigma sigma^T
    double a00 = matrix[0][0] * matrix[0][0] + matrix[0][1] * matrix[0][1];
    double a11 = matrix[1][0] * matrix[1][0] + matrix[1][1] * matrix[1][1];
    double a01 = matrix[0][0] * matrix[1][0] + matrix[0][1] * matrix[1][1];
    double tr = a00 + a11, det = a00 * a11 - a01 * a01;
    double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    return tr / 2.0 - disc;
}

void DiffusionSpec::validate() const {
    if (kind == Kind::ConstantMatrix) {
        if (static_cast<int>(matrix.size()) != dim)
            throw ConfigError("sigma: matrix shape must match dimension");
        for (const auto& r : matrix)
            if (static_cast<int>(r.size()) != dim)
                throw ConfigError("sigma: matrix shape must match dimension");
    } else {
        if (static_cast<int>(base.size()) != dim || static_cast<int>(amp.size()) != dim)
            throw ConfigError("sigma: diag_tanh needs base/amp of length dim");
        for (int i = 0; i < dim; ++i)
            if (base[i] - std::abs(amp[i]) <= 0.0)
                throw ConfigError("sigma: diag_tanh must keep a positive floor");
    }
}

MixedAction MixedAction::dirac(int m, int u) {
    MixedAction v;
    v.w.assign(m, 0.0);
    v.w[u] = 1.0;
    return v;
}

MixedAction MixedAction::uniform(int m) {
    MixedAction v;
    v.w.assign(m, 1.0 / m);
    return v;
}

bool MixedAction::valid(double tol) const {
    double s = 0.0;
    for (double x : w) {
        if (x < -tol) return false;
        s += x;
    }
    return std::abs(s - 1.0) <= tol;
}

void require_valid(const MixedAction& v, const std::string& who) {
    if (!v.valid()) throw ConfigError(who + ": malformed mixed action (not a probability vector)");
}

void GameSpec::validate(const Grid& grid) const {
    if (dim != grid.dim()) throw ConfigError("game: dimension does not match grid");
    double L[kMaxDim];
    for (int a = 0; a < dim; ++a) L[a] = grid.half_width(a);
    drift1.validate("drift1");
    drift2.validate("drift2");
    if (drift1.actions != m1 || cost11.actions != m1 || cost21.actions != m1)
        throw ConfigError("game: player-1 action count mismatch");
    if (drift2.actions != m2 || cost12.actions != m2 || cost22.actions != m2)
        throw ConfigError("game: player-2 action count mismatch");
    cost11.validate("cost11", true, L);
    cost12.validate("cost12", true, L);
    cost21.validate("cost21", true, L);
    cost22.validate("cost22", true, L);
    sigma.validate();
}

namespace {

// sup over the box of t_a(x) + t_b(x) for one action pair. Exact closed form
// when either part is constant, both are tanh-affine, or the gauss centers
// coincide; otherwise a refined scan over a fine 1D/2D lattice.
double pair_sup(const ScalarTerm& ta, int ua, const ScalarTerm& tb, int ub,
                const Grid& grid) {
    double L[kMaxDim];
    for (int a = 0; a < grid.dim(); ++a) L[a] = grid.half_width(a);

    if (ta.kind == TermKind::Constant)
        return ta.value[ua] + tb.max_on_box(L, ub);
    if (tb.kind == TermKind::Constant)
        return tb.value[ub] + ta.max_on_box(L, ua);
    if (ta.kind == TermKind::TanhAffine && tb.kind == TermKind::TanhAffine) {
        double s = ta.value[ua] + tb.value[ub];
        for (int a = 0; a < grid.dim(); ++a)
            s += std::abs(ta.slope[ua][a] + tb.slope[ub][a]) * std::tanh(L[a]);
        return s;
    }
    if (ta.kind == TermKind::GaussBump && tb.kind == TermKind::GaussBump &&
        ta.center == tb.center && ta.value[ua] >= 0.0 && tb.value[ub] >= 0.0) {
        // co-located bumps: both maximal at the (clamped) center
        double d2a = box_dist2(ta.center.data(), L, grid.dim());
        return ta.value[ua] * std::exp(-d2a / (2.0 * ta.width * ta.width)) +
               tb.value[ub] * std::exp(-d2a / (2.0 * tb.width * tb.width));
    }
    // refined scan: 16x the solver resolution, then golden-section polish per axis
    double best = -1e300;
    double bx[kMaxDim] = {0.0, 0.0};
    int n0 = 16 * (grid.npts(0) - 1) + 1;
    int n1 = grid.dim() == 2 ? 16 * (grid.npts(1) - 1) + 1 : 1;
    for (int i = 0; i < n0; ++i) {
        for (int j = 0; j < n1; ++j) {
            double x[kMaxDim];
            x[0] = -L[0] + 2.0 * L[0] * i / (n0 - 1);
            if (grid.dim() == 2) x[1] = -L[1] + 2.0 * L[1] * j / (n1 - 1);
            double v = ta.eval(x, ua) + tb.eval(x, ub);
            if (v > best) {
                best = v;
                bx[0] = x[0];
                if (grid.dim() == 2) bx[1] = x[1];
            }
        }
    }
    // local polish, coordinate-wise golden section
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int sweep = 0; sweep < 3; ++sweep) {
        for (int a = 0; a < grid.dim(); ++a) {
            double step = 2.0 * L[a] * 16.0 / (16.0 * (grid.npts(a) - 1));
            double lo = std::max(-L[a], bx[a] - step), hi = std::min(L[a], bx[a] + step);
            double x[kMaxDim] = {bx[0], grid.dim() == 2 ? bx[1] : 0.0};
            for (int it = 0; it < 60; ++it) {
                double m1p = hi - gr * (hi - lo), m2p = lo + gr * (hi - lo);
                x[a] = m1p;
                double f1 = ta.eval(x, ua) + tb.eval(x, ub);
                x[a] = m2p;
                double f2 = ta.eval(x, ua) + tb.eval(x, ub);
                if (f1 < f2) lo = m1p; else hi = m2p;
            }
            x[a] = 0.5 * (lo + hi);
            double v = ta.eval(x, ua) + tb.eval(x, ub);
            if (v > best) {
                best = v;
                bx[a] = x[a];
            }
        }
    }
    return best;
}

}  // namespace

double GameSpec::cost_sup(int k, const Grid& grid) const {
    const ScalarTerm& own = (k == 1) ? cost11 : cost21;
    const ScalarTerm& oth = (k == 1) ? cost12 : cost22;
    double m = 0.0;
    for (int u1 = 0; u1 < own.actions; ++u1)
        for (int u2 = 0; u2 < oth.actions; ++u2)
            m = std::max(m, pair_sup(own, u1, oth, u2, grid));
    return m;
}

bool GameSpec::cost_sup_is_exact(int k) const {
    const ScalarTerm& a = (k == 1) ? cost11 : cost21;
    const ScalarTerm& b = (k == 1) ? cost12 : cost22;
    if (a.kind == TermKind::Constant || b.kind == TermKind::Constant) return true;
    if (a.kind == TermKind::TanhAffine && b.kind == TermKind::TanhAffine) return true;
    if (a.kind == TermKind::GaussBump && b.kind == TermKind::GaussBump &&
        a.center == b.center)
        return true;
    return false;
}

Vec mix_drift(const GameSpec& spec, const double* x, const MixedAction& v1,
              const MixedAction& v2) {
    require_valid(v1, "mix_drift");
    require_valid(v2, "mix_drift");
    Vec out(spec.dim, 0.0);
    Vec tmp(spec.dim);
    for (int u = 0; u < spec.m1; ++u) {
        if (v1.w[u] == 0.0) continue;
        spec.drift1.eval(x, u, tmp.data());
        for (int a = 0; a < spec.dim; ++a) out[a] += v1.w[u] * tmp[a];
    }
    for (int u = 0; u < spec.m2; ++u) {
        if (v2.w[u] == 0.0) continue;
        spec.drift2.eval(x, u, tmp.data());
        for (int a = 0; a < spec.dim; ++a) out[a] += v2.w[u] * tmp[a];
    }
    return out;
}

double mix_cost(const GameSpec& spec, int player, const double* x,
                const MixedAction& v1, const MixedAction& v2) {
    require_valid(v1, "mix_cost");
    require_valid(v2, "mix_cost");
    const ScalarTerm& own = (player == 1) ? spec.cost11 : spec.cost21;
    const ScalarTerm& oth = (player == 1) ? spec.cost12 : spec.cost22;
    double s = 0.0;
    for (int u = 0; u < spec.m1; ++u)
        if (v1.w[u] != 0.0) s += v1.w[u] * own.eval(x, u);
    for (int u = 0; u < spec.m2; ++u)
        if (v2.w[u] != 0.0) s += v2.w[u] * oth.eval(x, u);
    return s;
}

double WFunction::value(const double* x) const {
    if (family == Family::CoshSum) {
        double s = 0.0;
        for (int a = 0; a < dim; ++a) s += std::cosh(gamma[a] * x[a]);
        return s - (dim - 1);
    }
    double s = 1.0;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) s += x[i] * Q[i][j] * x[j];
    return s;
}

void WFunction::grad(const double* x, double* out) const {
    if (family == Family::CoshSum) {
        for (int a = 0; a < dim; ++a) out[a] = gamma[a] * std::sinh(gamma[a] * x[a]);
        return;
    }
    for (int i = 0; i < dim; ++i) {
        double s = 0.0;
        for (int j = 0; j < dim; ++j) s += (Q[i][j] + Q[j][i]) * x[j];
        out[i] = s;
    }
}

double WFunction::hess(const double* x, int i, int j) const {
    if (family == Family::CoshSum) {
        if (i != j) return 0.0;
        return gamma[i] * gamma[i] * std::cosh(gamma[i] * x[i]);
    }
    return Q[i][j] + Q[j][i];
}

void WFunction::hess_diag(const double* x, double* out) const {
    for (int a = 0; a < dim; ++a) out[a] = hess(x, a, a);
}

double generator_on_W(const GameSpec& spec, const WFunction& W, const double* x,
                      int u1, int u2) {
    int d = spec.dim;
    double b[kMaxDim], g[kMaxDim], a[kMaxDim], tmp[kMaxDim];
    spec.drift1.eval(x, u1, b);
    spec.drift2.eval(x, u2, tmp);
    for (int i = 0; i < d; ++i) b[i] += tmp[i];
    W.grad(x, g);
    spec.sigma.a_diag(x, a);
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += b[i] * g[i] + 0.5 * a[i] * W.hess(x, i, i);
    return s;
}

double generator_on_W_beta(const GameSpec& spec, const WFunction& W, double beta,
                           const double* x, int u1, int u2) {
    // L(W^beta) = beta W^{beta-1} <b, grad W>
    //           + 1/2 sum_i a_ii [beta W^{beta-1} W_ii + beta(beta-1) W^{beta-2} W_i^2]
    int d = spec.dim;
    double b[kMaxDim], g[kMaxDim], a[kMaxDim], tmp[kMaxDim];
    spec.drift1.eval(x, u1, b);
    spec.drift2.eval(x, u2, tmp);
    for (int i = 0; i < d; ++i) b[i] += tmp[i];
    W.grad(x, g);
    spec.sigma.a_diag(x, a);
    double w = W.value(x);
    double wb1 = std::pow(w, beta - 1.0);
    double wb2 = std::pow(w, beta - 2.0);
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
        s += beta * wb1 * b[i] * g[i];
        s += 0.5 * a[i] * (beta * wb1 * W.hess(x, i, i) + beta * (beta - 1.0) * wb2 * g[i] * g[i]);
    }
    return s;
}

CheckReport check_ellipticity(const GameSpec& spec, const Grid& grid) {
    CheckReport rep;
    double worst = 1e300;
    long worst_node = 0;
    for (long i = 0; i < grid.size(); ++i) {
        double x[kMaxDim];
        grid.node(i, x);
        double e = spec.sigma.a_min_eig(x);
        if (e < worst) {
            worst = e;
            worst_node = i;
        }
    }
    rep.holds = worst >= spec.ellip_min;
    rep.worst_margin = worst - spec.ellip_min;
    rep.worst_point = grid.node(worst_node);
    rep.detail = "min eigenvalue of a(x) over grid = " + format_g17(worst);
    return rep;
}

namespace {

CheckReport drift_condition_check(const GameSpec& spec, const Grid& grid,
                                  double slack_tol,
                                  const std::function<double(const double*, int, int)>& lhs) {
    // evaluates max over (nodes + midpoints) x pure pairs of lhs; holds iff <= slack_tol
    CheckReport rep;
    double worst = -1e300;
    std::vector<double> worst_pt;
    auto pts = grid.nodes_and_midpoints();
    for (const auto& x : pts) {
        for (int u1 = 0; u1 < spec.m1; ++u1)
            for (int u2 = 0; u2 < spec.m2; ++u2) {
                double v = lhs(x.data(), u1, u2);
                if (v > worst) {
                    worst = v;
                    worst_pt = x;
                }
            }
    }
    rep.holds = worst <= slack_tol;
    rep.worst_margin = -worst;
    rep.worst_point = worst_pt;
    return rep;
}

}  // namespace

CheckReport check_lyapunov(const GameSpec& spec, const LyapunovCertificate& cert,
                           const Grid& grid, double slack_tol) {
    if (!grid.contains_ball(cert.C.center.data(), cert.C.radius))
        throw ConfigError("lyapunov check: set C exceeds the truncated domain");
    // W >= 1 everywhere on the grid
    for (long i = 0; i < grid.size(); ++i) {
        double x[kMaxDim];
        grid.node(i, x);
        if (cert.W.value(x) < 1.0 - 1e-12)
            throw ConfigError("lyapunov check: W < 1 on the grid");
    }
    auto rep = drift_condition_check(
        spec, grid, slack_tol, [&](const double* x, int u1, int u2) {
            double lw = generator_on_W(spec, cert.W, x, u1, u2);
            double ind = cert.C.contains(x, spec.dim) ? 1.0 : 0.0;
            return lw + 2.0 * cert.delta * cert.W.value(x) - cert.c * ind;
        });
    rep.detail = "max over grid+midpoints and pure pairs of LW + 2*delta*W - c*1_C";
    return rep;
}

CheckReport check_small_cost(const GameSpec& spec, const Grid& grid, double theta,
                             double delta) {
    CheckReport rep;
    double r1 = spec.cost_sup(1, grid);
    double r2 = spec.cost_sup(2, grid);
    double worst = std::max(theta * r1, theta * r2);
    rep.holds = worst <= delta;
    rep.worst_margin = delta - worst;
    rep.detail = "theta*max(|r_1|,|r_2|) = " + format_g17(worst) +
                 " vs delta = " + format_g17(delta);
    return rep;
}

CheckReport check_a5(const GameSpec& spec, const LyapunovCertificate& cert,
                     const Grid& grid, double slack_tol) {
    if (!cert.a5) throw ConfigError("a5 check: certificate carries no tail data");
    const A5Data& a5 = *cert.a5;
    if (!grid.contains_ball(a5.C_hat.center.data(), a5.C_hat.radius))
        throw ConfigError("a5 check: set C_hat exceeds the truncated domain");
    auto rep = drift_condition_check(
        spec, grid, slack_tol, [&](const double* x, int u1, int u2) {
            double lw = generator_on_W_beta(spec, cert.W, a5.beta, x, u1, u2);
            double ind = a5.C_hat.contains(x, spec.dim) ? 1.0 : 0.0;
            return lw + a5.h.value(x, spec.dim) - a5.c_hat * ind;
        });
    rep.detail = "max over grid+midpoints and pure pairs of L(W^beta) + h - c_hat*1_Chat";
    return rep;
}

}  // namespace rsgame
