#include "rsgame/common.hpp"

#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rsgame {

namespace {
int g_thread_cap = 0;
}

void set_threads(int n) {
    g_thread_cap = n;
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#endif
}

int max_threads() {
#ifdef _OPENMP
    return g_thread_cap > 0 ? g_thread_cap : omp_get_max_threads();
#else
    return 1;
#endif
}

namespace {

// Fixed-block pairwise reduction; the tree shape depends only on the length.
double pairwise_block(const double* xs, size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i) s += xs[i];
        return s;
    }
    size_t half = n / 2;
    return pairwise_block(xs, half) + pairwise_block(xs + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> xs) {
    return pairwise_block(xs.data(), xs.size());
}

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace rsgame
