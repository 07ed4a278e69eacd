#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "onebit/location_family.hpp"
#include "onebit/threshold_density.hpp"

namespace onebit {

enum class PriorKind { gaussian, uniform, point_mass };

// Prior on the location used by the Bayesian bounds. The prior Fisher
// information is recomputed from the parameters, never stored.
struct PriorSpec {
    PriorKind kind = PriorKind::point_mass;
    double param = 0.0; // sigma_theta (gaussian), half-width T (uniform), theta (point mass)

    static PriorSpec gaussian(double sigma_theta);
    static PriorSpec uniform(double T);
    static PriorSpec point_mass(double theta);
    static PriorSpec parse(const std::string& spec);

    // E[(pi'/pi)^2]; 0 for a point mass by convention. Throws for the
    // uniform prior, whose density does not vanish at the endpoints.
    double fisher_info() const;
};

enum class BoundKind { van_trees, ceo, kappa_curve, kappa_uniform, median_variance };

struct BoundReport {
    std::vector<double> grid;
    std::vector<double> values;
    BoundKind bound_kind = BoundKind::van_trees;
};

// Bayesian Cramer-Rao bound on the MSE of any one-bit adaptive estimator:
// 1 / (4 f(0)^2 n + I0).
double van_trees_bound(const LocationFamily& family, std::int64_t n, const PriorSpec& prior);

// Distortion lower bound for the distributed setting from the Gaussian CEO
// problem at sum rate n: solves
//   n = (1/2) log2[ (sigma_theta^2 / D) * (Dn / (Dn - s^2 + D s^2/st^2))^n ]
// for D by bisection. Gaussian family and Gaussian prior only.
double ceo_bound(const LocationFamily& family, std::int64_t n, const PriorSpec& prior);

// kappa(theta) = sum_j w_j eta(t_j - theta) for a discrete threshold density.
double kappa(const LocationFamily& family, const ThresholdDensity& density, double theta);

// Worst-case precision of uniformly spread thresholds on [-T, T]:
// (1/2T) \int_0^{2T} eta(t) dt.
double kappa_uniform(const LocationFamily& family, double T);

// 1 / (4 f(0)^2), the asymptotic variance of the sample median.
double median_asymptotic_variance(const LocationFamily& family);

// Efficiency of a scheme with asymptotic variance V relative to the
// information bound: (1/sigma_f^2) / V.
double are_of(const LocationFamily& family, double asymptotic_variance);

std::string to_csv(const BoundReport& report);

} // namespace onebit
