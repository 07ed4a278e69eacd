#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "onebit/encoding.hpp"
#include "onebit/location_family.hpp"

namespace onebit {

enum class EstimatorScheme { quantile_inversion, sgd_average, one_round, max_likelihood };

struct EstimateResult {
    double theta_hat = 0.0;
    EstimatorScheme scheme = EstimatorScheme::quantile_inversion;
    std::int64_t n_bits = 0;
    // Set when the likelihood had no interior stationary point and the
    // estimate is a search-boundary value.
    bool degenerate = false;
};

struct Interval {
    double lo;
    double hi;
};

// theta_hat = theta0 - F^{-1}(clamp(mean bits)); bits were produced against
// the fixed threshold theta0.
EstimateResult estimate_quantile_inversion(std::span<const int> bits, double theta0,
                                           const LocationFamily& family);

// Sufficient-statistic form of the same estimator.
EstimateResult quantile_inversion_from_counts(std::int64_t ones, std::int64_t n,
                                              double theta0, const LocationFamily& family);

// Mean of the iterates theta_1..theta_n; the initializer theta_0 carries no
// data and is excluded.
EstimateResult estimate_sgd_average(const SgdTrajectory& traj);

EstimateResult estimate_one_round(const OneRoundRecord& record,
                                  const LocationFamily& family);

// Per-threshold sufficient statistics for the maximum-likelihood estimator.
struct ThresholdCounts {
    double t;
    std::int64_t n = 0;
    std::int64_t ones = 0;
};

// Maximum-likelihood estimate of the location from threshold bits: the root
// in theta of the (monotone, by log-concavity of F) likelihood score, found
// by bisection over theta_bounds. When the score has no sign change there,
// the boundary with the higher likelihood is returned and the result is
// flagged degenerate.
EstimateResult estimate_ml(std::span<const int> bits, std::span<const double> thresholds,
                           const LocationFamily& family, Interval theta_bounds);

EstimateResult estimate_ml_grouped(std::span<const ThresholdCounts> groups,
                                   const LocationFamily& family, Interval theta_bounds);

// d/dtheta of the bit log-likelihood; exposed for concavity diagnostics.
double ml_score(std::span<const ThresholdCounts> groups, const LocationFamily& family,
                double theta);

Interval default_theta_bounds(const LocationFamily& family);

} // namespace onebit
