#pragma once

#include <array>
#include <vector>

#include "rsgame/common.hpp"

namespace rsgame {

constexpr int kMaxDim = 2;

/// Uniform tensor lattice over [-L_1,L_1] x ... with reflecting (Neumann)
/// boundary closure.
class Grid {
  public:
    static Grid make(int dim, const std::array<double, kMaxDim>& half_width,
                     const std::array<double, kMaxDim>& dx, int min_nodes = 3);
    static Grid make_uniform(int dim, double L, double dx, int min_nodes = 3);

    int dim() const { return dim_; }
    long size() const { return total_; }
    int npts(int axis) const { return npts_[axis]; }
    double dx(int axis) const { return dx_[axis]; }
    double half_width(int axis) const { return half_width_[axis]; }
    long stride(int axis) const { return stride_[axis]; }

    // flat index -> per-axis index / coordinate
    int axis_index(long flat, int axis) const {
        return static_cast<int>((flat / stride_[axis]) % npts_[axis]);
    }
    double coord(long flat, int axis) const {
        return -half_width_[axis] + dx_[axis] * axis_index(flat, axis);
    }
    void node(long flat, double* out) const {
        for (int a = 0; a < dim_; ++a) out[a] = coord(flat, a);
    }
    std::vector<double> node(long flat) const {
        std::vector<double> x(dim_);
        node(flat, x.data());
        return x;
    }

    long nearest_node(const double* x) const;
    bool interior(long flat) const;
    bool contains_ball(const double* center, double radius) const;

    // Nodes plus edge midpoints: the double-resolution lattice used by the
    // assumption checkers.
    std::vector<std::vector<double>> nodes_and_midpoints() const;

  private:
    int dim_ = 1;
    std::array<double, kMaxDim> half_width_{};
    std::array<double, kMaxDim> dx_{};
    std::array<int, kMaxDim> npts_{};
    std::array<long, kMaxDim> stride_{};
    long total_ = 0;
};

/// Logarithmic risk-level lattice theta_j = kappa * (Theta/kappa)^(j/n),
/// uniform in s = log(theta).
class ThetaGrid {
  public:
    static ThetaGrid make(double kappa, double Theta, int n_steps);

    double kappa() const { return nodes_.front(); }
    double Theta() const { return nodes_.back(); }
    int n_steps() const { return static_cast<int>(nodes_.size()) - 1; }
    int n_levels() const { return static_cast<int>(nodes_.size()); }
    double node(int j) const { return nodes_[j]; }
    double ds() const { return ds_; }
    double dtheta(int j) const { return nodes_[j + 1] - nodes_[j]; }
    int nearest_level(double theta) const;

  private:
    std::vector<double> nodes_;
    double ds_ = 0.0;
};

}  // namespace rsgame
