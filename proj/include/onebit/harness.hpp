#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "onebit/encoding.hpp"
#include "onebit/estimation.hpp"
#include "onebit/location_family.hpp"
#include "onebit/threshold_density.hpp"

namespace onebit {

// --- scheme tags -----------------------------------------------------------

struct FixedThresholdScheme {
    double t0 = 0.0;
};
struct QuantileInversionScheme {
    double theta0 = 0.0;
};
struct SgdAverageScheme {
    SgdConfig cfg;
};
struct OneRoundScheme {
    double theta0 = 0.0;
    std::int64_t n1_fixed = 0; // 0 selects floor(sqrt(n))
};
struct MlThresholdDensityScheme {
    ThresholdDensity density;
};
struct BaselineMeanScheme {};
struct BaselineMedianScheme {};

using Scheme = std::variant<FixedThresholdScheme, QuantileInversionScheme, SgdAverageScheme,
                            OneRoundScheme, MlThresholdDensityScheme, BaselineMeanScheme,
                            BaselineMedianScheme>;

std::string scheme_label(const Scheme& scheme);

struct FixedTheta {
    double theta = 0.0;
};
struct UniformThetaPrior {
    double lo = 0.0;
    double hi = 0.0;
};
using ThetaSource = std::variant<FixedTheta, UniformThetaPrior>;

struct ExperimentConfig {
    LocationFamily family = LocationFamily::gaussian(1.0);
    Scheme scheme = SgdAverageScheme{};
    ThetaSource theta_source = FixedTheta{};
    std::vector<std::int64_t> n_list;
    std::int64_t trials = 10000;
    std::uint64_t seed = 0;

    void validate() const;
};

// Monte Carlo estimates of n * E[(theta_hat - theta)^2] per sample size.
// Reruns with the same (config, seed) are byte-identical regardless of the
// worker count: every trial draws from its own generator seeded by
// derive_seed(seed, n, trial) and the reduction is pairwise in trial order.
struct RiskCurve {
    std::vector<std::int64_t> n_values;
    std::vector<double> n_mse;
    std::vector<double> std_err;
    std::vector<std::int64_t> failures; // degenerate estimates, excluded from the MSE
    std::string scheme;
    std::string family;
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
};

RiskCurve run_risk_experiment(const ExperimentConfig& config);

struct FastRateResult {
    double failure_fraction = 0.0;
    double median_abs_error = 0.0;
    std::int64_t n = 0;
    std::int64_t trials = 0;
};

// Two-stage grid-scan location estimator for the uniform family on
// [theta - halfwidth, theta + halfwidth] from one bit per observation and a
// single threshold update; uses 2n observations. Requires |theta| <= log n.
double uniform_two_stage_estimate(double halfwidth, std::int64_t n, double theta, Rng& rng);

// Failure fraction of the radius-(8 log n / n^{3/4}) event over trials with
// theta drawn uniformly from (-log n, log n).
FastRateResult uniform_fast_rate_experiment(double halfwidth, std::int64_t n,
                                            std::int64_t trials, std::uint64_t seed);

// ARE[n] = (1 / sigma_f^2) / n_mse[n].
std::vector<std::pair<std::int64_t, double>> compute_are_curve(const RiskCurve& curve,
                                                               const LocationFamily& family);

enum class OutputFormat { csv, json };

std::string to_csv(const RiskCurve& curve);
std::string to_json(const RiskCurve& curve);

// Columns n,<label0>,<label1>,... for curves sharing one n grid, the layout
// used to plot several schemes against each other.
std::string merged_csv(const std::vector<RiskCurve>& curves,
                       const std::vector<std::string>& labels);

// Writes to the given path ("-" or empty writes to stdout); errors carry
// the path in the exception text.
void write_output(const std::string& text, const std::string& path);

} // namespace onebit
