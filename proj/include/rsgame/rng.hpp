#pragma once

#include <cmath>
#include <cstdint>

namespace rsgame {

// Counter-based random numbers: every draw is a stateless hash of
// (seed, stream, step, draw). Paths can be generated in any order, on any
// number of threads, and reproduce bitwise.
class CounterRng {
  public:
    explicit CounterRng(uint64_t seed) : seed_(seed) {}

    uint64_t bits(uint64_t stream, uint64_t step, uint32_t draw) const {
        uint64_t z = seed_;
        z = mix(z ^ (stream * 0x9e3779b97f4a7c15ULL));
        z = mix(z ^ (step * 0xbf58476d1ce4e5b9ULL));
        z = mix(z ^ (static_cast<uint64_t>(draw) * 0x94d049bb133111ebULL));
        return z;
    }

    // Uniform in (0,1), 53-bit resolution, never exactly 0.
    double uniform(uint64_t stream, uint64_t step, uint32_t draw) const {
        uint64_t b = bits(stream, step, draw);
        return (static_cast<double>(b >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; consumes draws (2*pair, 2*pair+1).
    void gauss_pair(uint64_t stream, uint64_t step, uint32_t pair,
                    double& g0, double& g1) const {
        double u1 = uniform(stream, step, 2 * pair);
        double u2 = uniform(stream, step, 2 * pair + 1);
        double r = std::sqrt(-2.0 * std::log(u1));
        g0 = r * std::cos(6.283185307179586476925286766559 * u2);
        g1 = r * std::sin(6.283185307179586476925286766559 * u2);
    }

    // Sample an index from a weight vector (weights sum to ~1).
    int categorical(const double* w, int m, uint64_t stream, uint64_t step,
                    uint32_t draw) const {
        double u = uniform(stream, step, draw);
        double acc = 0.0;
        for (int i = 0; i < m; ++i) {
            acc += w[i];
            if (u <= acc) return i;
        }
        return m - 1;
    }

    uint64_t seed() const { return seed_; }

  private:
    static uint64_t mix(uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    uint64_t seed_;
};

}  // namespace rsgame
