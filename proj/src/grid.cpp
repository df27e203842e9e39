#include "rsgame/grid.hpp"

#include <algorithm>
#include <cmath>

namespace rsgame {

Grid Grid::make(int dim, const std::array<double, kMaxDim>& half_width,
                const std::array<double, kMaxDim>& dx, int min_nodes) {
    if (dim < 1 || dim > kMaxDim) throw ConfigError("grid: dimension must be 1 or 2");
    Grid g;
    g.dim_ = dim;
    g.total_ = 1;
    for (int a = 0; a < dim; ++a) {
        if (dx[a] <= 0.0 || half_width[a] <= 0.0)
            throw ConfigError("grid: L and dx must be positive");
        double n_real = 2.0 * half_width[a] / dx[a];
        long n_cells = std::lround(n_real);
        if (std::abs(n_real - static_cast<double>(n_cells)) > 1e-9)
            throw ConfigError("grid: 2*L must be an integer multiple of dx");
        int n = static_cast<int>(n_cells) + 1;
        if (n < min_nodes) throw ConfigError("grid: too few nodes per dimension");
        g.half_width_[a] = half_width[a];
        g.dx_[a] = dx[a];
        g.npts_[a] = n;
    }
    g.stride_[0] = 1;
    for (int a = 1; a < dim; ++a) g.stride_[a] = g.stride_[a - 1] * g.npts_[a - 1];
    for (int a = 0; a < dim; ++a) g.total_ *= g.npts_[a];
    return g;
}

Grid Grid::make_uniform(int dim, double L, double dx, int min_nodes) {
    std::array<double, kMaxDim> hw{};
    std::array<double, kMaxDim> d{};
    for (int a = 0; a < dim; ++a) {
        hw[a] = L;
        d[a] = dx;
    }
    return make(dim, hw, d, min_nodes);
}

long Grid::nearest_node(const double* x) const {
    long flat = 0;
    for (int a = 0; a < dim_; ++a) {
        long i = std::lround((x[a] + half_width_[a]) / dx_[a]);
        i = std::clamp<long>(i, 0, npts_[a] - 1);
        flat += i * stride_[a];
    }
    return flat;
}

bool Grid::interior(long flat) const {
    for (int a = 0; a < dim_; ++a) {
        int i = axis_index(flat, a);
        if (i == 0 || i == npts_[a] - 1) return false;
    }
    return true;
}

bool Grid::contains_ball(const double* center, double radius) const {
    for (int a = 0; a < dim_; ++a) {
        if (center[a] - radius < -half_width_[a] - 1e-12) return false;
        if (center[a] + radius > half_width_[a] + 1e-12) return false;
    }
    return true;
}

std::vector<std::vector<double>> Grid::nodes_and_midpoints() const {
    // The double-resolution lattice: every half-step point, which contains
    // all nodes and all edge/face midpoints.
    std::vector<std::vector<double>> pts;
    std::array<int, kMaxDim> n2{};
    long total = 1;
    for (int a = 0; a < dim_; ++a) {
        n2[a] = 2 * (npts_[a] - 1) + 1;
        total *= n2[a];
    }
    pts.reserve(total);
    for (long f = 0; f < total; ++f) {
        std::vector<double> x(dim_);
        long rem = f;
        for (int a = 0; a < dim_; ++a) {
            int i = static_cast<int>(rem % n2[a]);
            rem /= n2[a];
            x[a] = -half_width_[a] + 0.5 * dx_[a] * i;
        }
        pts.push_back(std::move(x));
    }
    return pts;
}

ThetaGrid ThetaGrid::make(double kappa, double Theta, int n_steps) {
    if (!(kappa > 0.0) || !(kappa < Theta))
        throw ConfigError("theta grid: need 0 < kappa < Theta");
    if (n_steps < 1) throw ConfigError("theta grid: need at least one step");
    ThetaGrid tg;
    tg.ds_ = std::log(Theta / kappa) / n_steps;
    tg.nodes_.resize(n_steps + 1);
    for (int j = 0; j <= n_steps; ++j)
        tg.nodes_[j] = kappa * std::pow(Theta / kappa, static_cast<double>(j) / n_steps);
    tg.nodes_.front() = kappa;
    tg.nodes_.back() = Theta;
    return tg;
}

int ThetaGrid::nearest_level(double theta) const {
    if (theta <= nodes_.front()) return 0;
    if (theta >= nodes_.back()) return n_steps();
    double j = std::log(theta / nodes_.front()) / ds_;
    int lo = std::clamp(static_cast<int>(j), 0, n_steps() - 1);
    // pick the closer of the two bracketing nodes (in log scale)
    double dl = std::log(theta / nodes_[lo]);
    double dr = std::log(nodes_[lo + 1] / theta);
    return dl <= dr ? lo : lo + 1;
}

}  // namespace rsgame
