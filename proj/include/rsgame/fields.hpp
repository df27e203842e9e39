#pragma once

#include "rsgame/grid.hpp"
#include "rsgame/model.hpp"

namespace rsgame {

/// Mixed action per node, either per theta level (eventually stationary) or a
/// single level broadcast to every theta (stationary).
class StrategyField {
  public:
    StrategyField() = default;
    StrategyField(int actions, long n_nodes, int n_levels);

    static StrategyField stationary_uniform(int actions, long n_nodes);
    static StrategyField stationary_dirac(int actions, long n_nodes, int u);
    static StrategyField uniform(int actions, long n_nodes, int n_levels);

    int actions() const { return m_; }
    long nodes() const { return n_; }
    int levels() const { return levels_; }
    bool stationary() const { return levels_ == 1; }

    const double* at(int level, long node) const {
        long lvl = stationary() ? 0 : level;
        return &w_[(lvl * n_ + node) * m_];
    }
    double* at_mut(int level, long node) {
        long lvl = stationary() ? 0 : level;
        return &w_[(lvl * n_ + node) * m_];
    }
    double weight(int level, long node, int u) const {
        long lvl = stationary() ? 0 : level;
        return w_[(lvl * n_ + node) * m_ + u];
    }
    void set(int level, long node, const MixedAction& v);
    void set_dirac(int level, long node, int u);
    MixedAction mixed(int level, long node) const;

    void validate() const;  // throws ConfigError on a malformed entry

    /// sup over (level, node) of the total-variation distance.
    static double sup_tv_change(const StrategyField& a, const StrategyField& b);
    /// this <- (1-beta)*this + beta*target (simplex-preserving).
    void blend(const StrategyField& target, double beta);

    bool operator==(const StrategyField& o) const = default;

  private:
    int m_ = 0;
    long n_ = 0;
    int levels_ = 0;
    Vec w_;
};

/// psi(theta_j, x_i) on ThetaGrid x Grid for one player.
struct ValueField {
    int player = 1;
    double alpha = 1.0;
    long n_nodes = 0;
    std::vector<Vec> levels;  // [theta level][node]

    const Vec& level(int j) const { return levels[j]; }
    double at(int j, long i) const { return levels[j][i]; }
};

struct ValueInvariantReport {
    double worst_lower = 0.0;      // min over nodes of psi - 1
    double worst_upper = 0.0;      // max over nodes of psi - bound
    double worst_monotone = 0.0;   // min over nodes/levels of psi_{j+1}-psi_j
    double worst_dtheta = 0.0;     // max discrete theta-derivative
    bool ok = false;
};

/// Enforces 1 <= psi <= exp(theta |r|/alpha) and theta-monotonicity.
ValueInvariantReport check_value_invariants(const ValueField& vf, const ThetaGrid& tg,
                                            double r_sup, double bound_slack = 1e-8,
                                            double mono_slack = 1e-10);
void require_value_invariants(const ValueField& vf, const ThetaGrid& tg, double r_sup,
                              double bound_slack = 1e-8, double mono_slack = 1e-10);

}  // namespace rsgame
