#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "onebit/location_family.hpp"
#include "onebit/threshold_density.hpp"

namespace onebit {

// Stepsize schedule gamma_n = gamma0 * n^(-exponent) for the sign recursion.
// The exponent window (2/3, 1) makes the schedule summable-square against
// 1/sqrt(n) while keeping the total step mass divergent.
struct SgdConfig {
    double gamma0 = 1.0;
    double exponent = 0.75;
    double theta_init = 0.0;

    void validate() const;
    double gamma(std::int64_t n) const;
};

// Iterates theta_0..theta_n and the sign bits B_1..B_n of the recursion
// theta_n = theta_{n-1} + gamma_n * B_n.
struct SgdTrajectory {
    std::vector<double> iterates;
    std::vector<int> bits; // entries are +1 or -1
};

struct OneRoundRecord {
    std::int64_t n1 = 0;
    std::vector<int> first_stage_bits;  // {0,1}
    double t_n = 0.0;
    std::vector<int> second_stage_bits; // {0,1}
};

// 1 iff x < t; a tie encodes 0.
inline int encode_fixed_threshold(double x, double t) { return x < t ? 1 : 0; }

// Clamps an empirical bit fraction into [1/(k+1), k/(k+1)] so quantile
// inversion stays finite on degenerate all-0/all-1 draws.
double clamp_bit_fraction(double fraction, std::int64_t bit_count);

SgdTrajectory run_adaptive_sgd(std::span<const double> samples, const SgdConfig& cfg);

OneRoundRecord run_one_round(std::span<const double> samples, double theta0,
                             std::int64_t n1, const LocationFamily& family);

std::vector<double> sample_thresholds(const ThresholdDensity& density,
                                      std::int64_t n, std::uint64_t seed);

} // namespace onebit
