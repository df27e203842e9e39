#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "rsgame/grid.hpp"

namespace rsgame {

enum class TermKind { Constant, TanhAffine, GaussBump };

/// One bounded, globally Lipschitz scalar family with per-action coefficients:
///   constant:    v(u)
///   tanh_affine: v(u) + sum_i m_i(u) * tanh(x_i)
///   gauss_bump:  p(u) * exp(-|x - c|^2 / (2 w^2))
struct ScalarTerm {
    TermKind kind = TermKind::Constant;
    int actions = 1;
    int dim = 1;
    Vec value;                     // [actions]  (constant / tanh offset / gauss weight)
    std::vector<Vec> slope;        // [actions][dim], tanh_affine only
    Vec center;                    // [dim], gauss_bump only
    double width = 1.0;            // gauss_bump only

    static ScalarTerm zero(int actions, int dim);
    static ScalarTerm constant(Vec values, int dim);

    double eval(const double* x, int u) const;
    // Exact range over the box [-L,L]^d for a single action.
    double max_on_box(const double* L, int u) const;
    double min_on_box(const double* L, int u) const;
    double lipschitz_bound(int u) const;
    void validate(const std::string& what, bool require_nonneg,
                  const double* box_L) const;
};

/// Vector-valued drift family; same kinds, componentwise coefficients.
struct VectorTerm {
    TermKind kind = TermKind::Constant;
    int actions = 1;
    int dim = 1;
    std::vector<Vec> value;              // [actions][dim]
    std::vector<std::vector<Vec>> slope; // [actions][dim][dim], tanh_affine
    Vec center;                          // [dim], gauss_bump
    double width = 1.0;

    static VectorTerm zero(int actions, int dim);

    void eval(const double* x, int u, double* out) const;
    double component_max_abs(const double* L, int u, int comp) const;
    double sup_norm(const double* L) const;  // max over actions/components
    double lipschitz_bound(int u) const;
    void validate(const std::string& what) const;
};

/// Diffusion: constant SPD matrix, or diagonal tanh-affine with a positive
/// floor. a(x) = sigma sigma^T.
struct DiffusionSpec {
    enum class Kind { ConstantMatrix, DiagTanh } kind = Kind::ConstantMatrix;
    int dim = 1;
    std::vector<Vec> matrix;  // [dim][dim], ConstantMatrix
    Vec base;                 // [dim], DiagTanh: sigma_ii = base_i + amp_i*tanh(x_i)
    Vec amp;

    void sigma_at(const double* x, double* out_rowmajor) const;
    // Diagonal of a(x); throws NumericalError if a has nonzero off-diagonals
    // (only possible for ConstantMatrix with dim 2).
    void a_diag(const double* x, double* out) const;
    bool a_is_diagonal() const;
    double a_min_eig(const double* x) const;
    void validate() const;
};

struct MixedAction {
    Vec w;
    static MixedAction dirac(int m, int u);
    static MixedAction uniform(int m);
    bool valid(double tol = 1e-12) const;
    int actions() const { return static_cast<int>(w.size()); }
};

void require_valid(const MixedAction& v, const std::string& who);

/// Two-player game with additive drift/cost structure. Player k's running
/// cost is r_k(x,u1,u2) = cost_k1(x,u1) + cost_k2(x,u2); the drift is
/// b(x,u1,u2) = drift1(x,u1) + drift2(x,u2).
struct GameSpec {
    int dim = 1;
    int m1 = 1, m2 = 1;
    VectorTerm drift1, drift2;
    ScalarTerm cost11, cost12;  // player 1's cost: own-action part, opponent part
    ScalarTerm cost21, cost22;  // player 2's cost
    DiffusionSpec sigma;
    double ellip_min = 1e-6;

    void validate(const Grid& grid) const;

    const ScalarTerm& own_cost(int player) const { return player == 1 ? cost11 : cost22; }
    const ScalarTerm& cross_cost(int player) const { return player == 1 ? cost12 : cost21; }
    const VectorTerm& drift(int player) const { return player == 1 ? drift1 : drift2; }
    int actions(int player) const { return player == 1 ? m1 : m2; }

    // Supremum of r_k over the box and all pure action pairs. Closed form per
    // family when available, refined scan otherwise (see cost_sup_is_exact).
    double cost_sup(int k, const Grid& grid) const;
    bool cost_sup_is_exact(int k) const;
};

Vec mix_drift(const GameSpec& spec, const double* x, const MixedAction& v1,
              const MixedAction& v2);
double mix_cost(const GameSpec& spec, int player, const double* x,
                const MixedAction& v1, const MixedAction& v2);

/// Built-in Lyapunov function families with analytic derivatives:
///   cosh_sum: W(x) = sum_i cosh(gamma_i x_i) - (d - 1)   (>= 1)
///   quad:     W(x) = 1 + x^T Q x, Q SPD
struct WFunction {
    enum class Family { CoshSum, Quad } family = Family::CoshSum;
    int dim = 1;
    Vec gamma;                // [dim], cosh_sum
    std::vector<Vec> Q;       // [dim][dim], quad

    double value(const double* x) const;
    void grad(const double* x, double* out) const;
    void hess_diag(const double* x, double* out) const;  // full Hessian diag
    double hess(const double* x, int i, int j) const;
};

/// Inf-compact comparison function for the tail condition: h(x) = scale*|x|^2.
struct HFunction {
    double scale = 0.0;
    double value(const double* x, int dim) const {
        double s = 0.0;
        for (int a = 0; a < dim; ++a) s += x[a] * x[a];
        return scale * s;
    }
};

struct Ball {
    Vec center;
    double radius = 1.0;
    bool contains(const double* x, int dim) const {
        double s = 0.0;
        for (int a = 0; a < dim; ++a) {
            double d = x[a] - center[a];
            s += d * d;
        }
        return s <= radius * radius + 1e-15;
    }
};

struct A5Data {
    double beta = 2.0;
    HFunction h;
    double c_hat = 1.0;
    Ball C_hat;
};

struct LyapunovCertificate {
    WFunction W;
    double delta = 0.0;
    double c = 0.0;
    Ball C;
    std::optional<A5Data> a5;
};

struct CheckReport {
    bool holds = false;
    double worst_margin = 0.0;  // positive margin = condition satisfied with room
    Vec worst_point;
    std::string detail;
};

CheckReport check_ellipticity(const GameSpec& spec, const Grid& grid);
CheckReport check_lyapunov(const GameSpec& spec, const LyapunovCertificate& cert,
                           const Grid& grid, double slack_tol = 1e-9);
CheckReport check_small_cost(const GameSpec& spec, const Grid& grid, double theta,
                             double delta);
CheckReport check_a5(const GameSpec& spec, const LyapunovCertificate& cert,
                     const Grid& grid, double slack_tol = 1e-9);

/// Generator of the state process applied to a C^2 function with analytic
/// derivatives, at a pure action pair.
double generator_on_W(const GameSpec& spec, const WFunction& W, const double* x,
                      int u1, int u2);
double generator_on_W_beta(const GameSpec& spec, const WFunction& W, double beta,
                           const double* x, int u1, int u2);

}  // namespace rsgame
