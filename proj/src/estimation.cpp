#include "onebit/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace onebit {
namespace {

double log_likelihood(std::span<const ThresholdCounts> groups,
                      const LocationFamily& family, double theta) {
    double ll = 0.0;
    for (const auto& g : groups) {
        const double x = g.t - theta;
        if (g.ones > 0) ll += static_cast<double>(g.ones) * family.log_cdf(x);
        const std::int64_t zeros = g.n - g.ones;
        if (zeros > 0) ll += static_cast<double>(zeros) * family.log_cdf(-x);
    }
    return ll;
}

} // namespace

double ml_score(std::span<const ThresholdCounts> groups, const LocationFamily& family,
                double theta) {
    double score = 0.0;
    for (const auto& g : groups) {
        const double x = g.t - theta;
        if (g.ones > 0) {
            // d/dtheta log F(t - theta) = -f/F evaluated at t - theta.
            score -= static_cast<double>(g.ones) *
                     std::exp(family.log_pdf(x) - family.log_cdf(x));
        }
        const std::int64_t zeros = g.n - g.ones;
        if (zeros > 0) {
            score += static_cast<double>(zeros) *
                     std::exp(family.log_pdf(x) - family.log_cdf(-x));
        }
    }
    return score;
}

EstimateResult estimate_quantile_inversion(std::span<const int> bits, double theta0,
                                           const LocationFamily& family) {
    if (bits.empty()) throw std::invalid_argument("estimate_quantile_inversion: empty bits");
    std::int64_t ones = 0;
    for (int b : bits) ones += b;
    return quantile_inversion_from_counts(ones, static_cast<std::int64_t>(bits.size()),
                                          theta0, family);
}

EstimateResult quantile_inversion_from_counts(std::int64_t ones, std::int64_t n,
                                              double theta0, const LocationFamily& family) {
    if (n < 1) throw std::invalid_argument("quantile_inversion_from_counts: n must be >= 1");
    const double p = clamp_bit_fraction(static_cast<double>(ones) / static_cast<double>(n), n);
    EstimateResult res;
    res.theta_hat = theta0 - family.quantile(p);
    res.scheme = EstimatorScheme::quantile_inversion;
    res.n_bits = n;
    return res;
}

EstimateResult estimate_sgd_average(const SgdTrajectory& traj) {
    if (traj.iterates.size() < 2)
        throw std::invalid_argument("estimate_sgd_average: need at least one step");
    double sum = 0.0;
    for (std::size_t i = 1; i < traj.iterates.size(); ++i) sum += traj.iterates[i];
    EstimateResult res;
    res.theta_hat = sum / static_cast<double>(traj.iterates.size() - 1);
    res.scheme = EstimatorScheme::sgd_average;
    res.n_bits = static_cast<std::int64_t>(traj.bits.size());
    return res;
}

EstimateResult estimate_one_round(const OneRoundRecord& record,
                                  const LocationFamily& family) {
    const auto n2 = static_cast<std::int64_t>(record.second_stage_bits.size());
    if (record.n1 < 1 || n2 < 1)
        throw std::invalid_argument("estimate_one_round: malformed record");
    std::int64_t ones = 0;
    for (int b : record.second_stage_bits) ones += b;
    const double p = clamp_bit_fraction(static_cast<double>(ones) / static_cast<double>(n2), n2);
    EstimateResult res;
    res.theta_hat = record.t_n - family.quantile(p);
    res.scheme = EstimatorScheme::one_round;
    res.n_bits = record.n1 + n2;
    return res;
}

EstimateResult estimate_ml(std::span<const int> bits, std::span<const double> thresholds,
                           const LocationFamily& family, Interval theta_bounds) {
    if (bits.empty() || bits.size() != thresholds.size())
        throw std::invalid_argument("estimate_ml: bits/thresholds length mismatch");
    std::map<double, ThresholdCounts> grouped;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        auto& g = grouped[thresholds[i]];
        g.t = thresholds[i];
        g.n += 1;
        g.ones += bits[i];
    }
    std::vector<ThresholdCounts> groups;
    groups.reserve(grouped.size());
    for (const auto& [t, g] : grouped) groups.push_back(g);
    return estimate_ml_grouped(groups, family, theta_bounds);
}

EstimateResult estimate_ml_grouped(std::span<const ThresholdCounts> groups,
                                   const LocationFamily& family, Interval theta_bounds) {
    if (groups.empty()) throw std::invalid_argument("estimate_ml_grouped: empty input");
    if (!std::isfinite(theta_bounds.lo) || !std::isfinite(theta_bounds.hi) ||
        !(theta_bounds.lo < theta_bounds.hi))
        throw std::invalid_argument("estimate_ml_grouped: bad theta bounds");

    EstimateResult res;
    res.scheme = EstimatorScheme::max_likelihood;
    for (const auto& g : groups) res.n_bits += g.n;

    double lo = theta_bounds.lo;
    double hi = theta_bounds.hi;
    const double score_lo = ml_score(groups, family, lo);
    const double score_hi = ml_score(groups, family, hi);
    if (score_lo <= 0.0 || score_hi >= 0.0) {
        // The concave log-likelihood is monotone across the whole bracket;
        // its supremum sits on a boundary.
        res.theta_hat = log_likelihood(groups, family, lo) >=
                                log_likelihood(groups, family, hi)
                            ? lo
                            : hi;
        res.degenerate = true;
        return res;
    }
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (ml_score(groups, family, mid) > 0.0) lo = mid; else hi = mid;
    }
    res.theta_hat = 0.5 * (lo + hi);
    return res;
}

Interval default_theta_bounds(const LocationFamily& family) {
    return {-10.0 * family.scale(), 10.0 * family.scale()};
}

} // namespace onebit
