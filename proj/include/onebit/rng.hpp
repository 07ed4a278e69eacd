#pragma once

#include <cstdint>
#include <random>

namespace onebit {

// splitmix64 finalizer; full avalanche on 64 bits.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seed stream for Monte Carlo replicates: stream(seed, n, trial) is stable
// under changes to the rest of the schedule, so adding sample sizes or
// trials never perturbs existing ones.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = mix64(seed ^ (a * 0x9e3779b97f4a7c15ULL));
    return mix64(z ^ (b * 0xc2b2ae3d27d4eb4fULL));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform on the open interval (0,1); never returns an endpoint, so
    // inverse-CDF transforms stay finite.
    double uniform01() {
        return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // Index draw from cumulative weights (strictly increasing where mass
    // is positive); zero-weight atoms are never selected.
    std::size_t discrete(const double* cumulative, std::size_t count) {
        const double u = uniform01();
        std::size_t lo = 0, hi = count - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (cumulative[mid] > u) hi = mid; else lo = mid + 1;
        }
        return lo;
    }

private:
    std::mt19937_64 eng_;
};

} // namespace onebit
