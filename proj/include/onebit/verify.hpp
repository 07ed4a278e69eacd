#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "onebit/location_family.hpp"
#include "onebit/threshold_density.hpp"

namespace onebit {

// Finite union of disjoint intervals (a1,b1), ..., (aK,bK) stored as the
// flat endpoint list a1,b1,...,aK,bK; a1 may be -inf and bK may be +inf.
struct IntervalUnion {
    std::vector<double> endpoints;

    static IntervalUnion make(std::vector<double> endpoints);
    std::size_t interval_count() const { return endpoints.size() / 2; }
};

IntervalUnion complement(const IntervalUnion& region);

struct ViolationReport {
    std::int64_t trials = 0;
    double max_lhs_minus_rhs = 0.0;
    std::string worst_case_input;

    bool violated(double tol) const { return max_lhs_minus_rhs > tol; }
};

// Randomized check of the alternating-sum envelope inequality: for sorted
// x_1 >= ... >= x_n the ratio |sum (-1)^{k+1} f(x_k)|^{2+delta} /
// (|D| |1-D|)^{1+delta} with D = sum (-1)^{k+1} F(x_k) never exceeds
// max_i eta_delta(x_i). Draws come from the family scaled by 3 plus a set
// of deterministic adversarial patterns; near-degenerate draws with
// |D(1-D)| < 1e-12 are skipped. Requires eta_delta to be non-increasing in
// |x| (checked first; throws std::invalid_argument otherwise).
ViolationReport check_interval_lemma(const LocationFamily& family, double delta,
                                     int n_max, std::int64_t trials, std::uint64_t seed);

// Fisher information of the single bit 1{X in A} about the location at
// theta: (sum_j f(a_j-theta) - f(b_j-theta))^2 / (P (1-P)).
double bit_fisher_information(const LocationFamily& family, const IntervalUnion& region,
                              double theta);

// Scans eta on a symmetric grid and reports the largest increase moving
// away from the origin (positive margin = monotonicity violation).
ViolationReport check_eta_monotone(const LocationFamily& family, double grid_halfwidth,
                                   int points);

// Same scan for eta_delta.
ViolationReport check_eta_delta_monotone(const LocationFamily& family, double delta,
                                         double grid_halfwidth, int points);

// Number of separated clusters of grid points where kappa(theta) comes
// within 1e-9 of its ceiling eta(0).
int kappa_equality_points(const LocationFamily& family, const ThresholdDensity& density,
                          const std::vector<double>& theta_grid);

} // namespace onebit
