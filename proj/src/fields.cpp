#include "rsgame/fields.hpp"

#include <algorithm>
#include <cmath>

namespace rsgame {

StrategyField::StrategyField(int actions, long n_nodes, int n_levels)
    : m_(actions), n_(n_nodes), levels_(n_levels) {
    w_.assign(static_cast<size_t>(n_levels) * n_nodes * actions, 0.0);
}

StrategyField StrategyField::stationary_uniform(int actions, long n_nodes) {
    StrategyField f(actions, n_nodes, 1);
    std::fill(f.w_.begin(), f.w_.end(), 1.0 / actions);
    return f;
}

StrategyField StrategyField::stationary_dirac(int actions, long n_nodes, int u) {
    StrategyField f(actions, n_nodes, 1);
    for (long i = 0; i < n_nodes; ++i) f.w_[i * actions + u] = 1.0;
    return f;
}

StrategyField StrategyField::uniform(int actions, long n_nodes, int n_levels) {
    StrategyField f(actions, n_nodes, n_levels);
    std::fill(f.w_.begin(), f.w_.end(), 1.0 / actions);
    return f;
}

void StrategyField::set(int level, long node, const MixedAction& v) {
    double* p = at_mut(level, node);
    for (int u = 0; u < m_; ++u) p[u] = v.w[u];
}

void StrategyField::set_dirac(int level, long node, int u) {
    double* p = at_mut(level, node);
    for (int k = 0; k < m_; ++k) p[k] = 0.0;
    p[u] = 1.0;
}

MixedAction StrategyField::mixed(int level, long node) const {
    MixedAction v;
    const double* p = at(level, node);
    v.w.assign(p, p + m_);
    return v;
}

void StrategyField::validate() const {
    for (int j = 0; j < levels_; ++j)
        for (long i = 0; i < n_; ++i) {
            const double* p = at(j, i);
            double s = 0.0;
            for (int u = 0; u < m_; ++u) {
                if (p[u] < -1e-12) throw ConfigError("strategy field: negative weight");
                s += p[u];
            }
            if (std::abs(s - 1.0) > 1e-12)
                throw ConfigError("strategy field: weights do not sum to one");
        }
}

double StrategyField::sup_tv_change(const StrategyField& a, const StrategyField& b) {
    if (a.m_ != b.m_ || a.n_ != b.n_)
        throw ConfigError("strategy change: incompatible fields");
    int levels = std::max(a.levels_, b.levels_);
    double worst = 0.0;
    for (int j = 0; j < levels; ++j)
        for (long i = 0; i < a.n_; ++i) {
            const double* pa = a.at(std::min(j, a.levels_ - 1), i);
            const double* pb = b.at(std::min(j, b.levels_ - 1), i);
            double tv = 0.0;
            for (int u = 0; u < a.m_; ++u) tv += std::abs(pa[u] - pb[u]);
            worst = std::max(worst, 0.5 * tv);
        }
    return worst;
}

void StrategyField::blend(const StrategyField& target, double beta) {
    if (target.m_ != m_ || target.n_ != n_)
        throw ConfigError("strategy blend: incompatible fields");
    for (int j = 0; j < levels_; ++j)
        for (long i = 0; i < n_; ++i) {
            double* p = at_mut(j, i);
            const double* q = target.at(std::min(j, target.levels_ - 1), i);
            for (int u = 0; u < m_; ++u) p[u] = (1.0 - beta) * p[u] + beta * q[u];
        }
}

ValueInvariantReport check_value_invariants(const ValueField& vf, const ThetaGrid& tg,
                                            double r_sup, double bound_slack,
                                            double mono_slack) {
    ValueInvariantReport rep;
    rep.worst_lower = 1e300;
    rep.worst_upper = -1e300;
    rep.worst_monotone = 1e300;
    rep.worst_dtheta = 0.0;
    int nl = static_cast<int>(vf.levels.size());
    for (int j = 0; j < nl; ++j) {
        double bound = std::exp(tg.node(j) * r_sup / vf.alpha);
        for (long i = 0; i < vf.n_nodes; ++i) {
            double v = vf.at(j, i);
            rep.worst_lower = std::min(rep.worst_lower, v - 1.0);
            rep.worst_upper = std::max(rep.worst_upper, v - bound * (1.0 + bound_slack));
        }
        if (j + 1 < nl) {
            for (long i = 0; i < vf.n_nodes; ++i) {
                double d = vf.at(j + 1, i) - vf.at(j, i);
                rep.worst_monotone = std::min(rep.worst_monotone, d);
                rep.worst_dtheta = std::max(rep.worst_dtheta, std::abs(d) / tg.dtheta(j));
            }
        }
    }
    rep.ok = rep.worst_lower >= -bound_slack && rep.worst_upper <= 0.0 &&
             rep.worst_monotone >= -mono_slack;
    return rep;
}

void require_value_invariants(const ValueField& vf, const ThetaGrid& tg, double r_sup,
                              double bound_slack, double mono_slack) {
    auto rep = check_value_invariants(vf, tg, r_sup, bound_slack, mono_slack);
    if (!rep.ok)
        throw NumericalError(
            "value field violates the a-priori bounds (lower " +
            format_g17(rep.worst_lower) + ", upper excess " + format_g17(rep.worst_upper) +
            ", monotonicity " + format_g17(rep.worst_monotone) +
            "); refine the theta step");
}

}  // namespace rsgame
