#pragma once

#include <string>
#include <string_view>

#include "onebit/rng.hpp"

namespace onebit {

enum class FamilyKind { gaussian, laplace, gennorm, uniform };

// Centered noise density of a symmetric log-concave location family; the
// location shift is applied by callers. Immutable value type, all methods
// are pure and safe to share across threads.
//
// Scale conventions: Gaussian is parameterized by its standard deviation,
// Laplace by its diversity b, the generalized normal by alpha in
// exp(-|x/alpha|^p), and the uniform by its half-width.
class LocationFamily {
public:
    static LocationFamily gaussian(double sigma);
    static LocationFamily laplace(double b);
    static LocationFamily gennorm(double shape, double alpha);
    static LocationFamily uniform(double halfwidth);

    // Parses "gaussian:SIGMA", "laplace:B", "gennorm:P:ALPHA",
    // "uniform:HALFWIDTH". Throws std::invalid_argument on anything else.
    static LocationFamily parse(std::string_view spec);

    FamilyKind kind() const { return kind_; }
    double scale() const { return scale_; }
    double shape() const { return shape_; }
    std::string name() const;

    double pdf(double x) const;
    double log_pdf(double x) const;
    double cdf(double x) const;
    double log_cdf(double x) const;

    // Inverse CDF; p must lie strictly inside (0,1).
    double quantile(double p) const;

    // eta(x) = f(x)^2 / (F(x) F(-x)), the single-threshold precision.
    // Requires x in the open support.
    double eta(double x) const;

    // eta_delta(x) = f(x)^(2+delta) / (F(x)(1-F(x)))^(1+delta); collapses
    // to eta at delta = 0.
    double eta_delta(double x, double delta) const;

    // h(x) = f(x) / F(-x). Requires x in the open support.
    double hazard(double x) const;

    // Fisher information of the location parameter. Undefined for the
    // uniform family (throws std::domain_error).
    double fisher_location() const;

    double variance() const;

    // Half-width of the support; +inf except for the uniform family.
    double support_halfwidth() const;
    bool in_open_support(double x) const;

    // Inverse-CDF draw from the centered density.
    double draw(Rng& rng) const { return quantile(rng.uniform01()); }

private:
    LocationFamily(FamilyKind kind, double scale, double shape);

    FamilyKind kind_;
    double scale_;
    double shape_;       // gennorm only
    double log_norm_;    // gennorm: log of p/(2 alpha Gamma(1/p))
};

} // namespace onebit
