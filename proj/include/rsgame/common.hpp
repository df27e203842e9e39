#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsgame {

using Vec = std::vector<double>;

/// Malformed configuration or inputs that violate a documented precondition.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A solve failed numerically (invariant breach, stagnation, unstable step).
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Worker cap for the OpenMP kernels. 0 means "whatever the runtime gives us".
void set_threads(int n);
int max_threads();

// Order-insensitive reduction: fixed-block pairwise summation. The result is
// independent of thread count because blocks are defined by index, not by
// scheduling.
double pairwise_sum(std::span<const double> xs);

std::string format_g17(double v);

inline double sup_abs(const Vec& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace rsgame
