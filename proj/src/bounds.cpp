#include "onebit/bounds.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "onebit/quadrature.hpp"

namespace onebit {
namespace {

const char* bound_kind_name(BoundKind kind) {
    switch (kind) {
    case BoundKind::van_trees: return "van_trees";
    case BoundKind::ceo: return "ceo";
    case BoundKind::kappa_curve: return "kappa_curve";
    case BoundKind::kappa_uniform: return "kappa_uniform";
    case BoundKind::median_variance: return "median_variance";
    }
    return "?";
}

// Right-hand side of the CEO sum-rate identity as a function of the
// distortion D; strictly decreasing on (D_min, sigma_theta^2].
double ceo_rate(double D, double n, double s2, double st2) {
    const double denom = D * n - s2 + D * s2 / st2;
    if (!(denom > 0.0)) return std::numeric_limits<double>::infinity();
    return 0.5 * (std::log2(st2 / D) + n * std::log2(D * n / denom));
}

} // namespace

PriorSpec PriorSpec::gaussian(double sigma_theta) {
    if (!(sigma_theta > 0.0)) throw std::invalid_argument("PriorSpec: sigma_theta must be positive");
    return {PriorKind::gaussian, sigma_theta};
}
PriorSpec PriorSpec::uniform(double T) {
    if (!(T > 0.0)) throw std::invalid_argument("PriorSpec: T must be positive");
    return {PriorKind::uniform, T};
}
PriorSpec PriorSpec::point_mass(double theta) { return {PriorKind::point_mass, theta}; }

PriorSpec PriorSpec::parse(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("unrecognized prior spec: " + spec);
    const std::string kind = spec.substr(0, colon);
    const double v = std::stod(spec.substr(colon + 1));
    if (kind == "gaussian") return gaussian(v);
    if (kind == "point") return point_mass(v);
    if (kind == "uniform") {
        // "uniform:A:B" (interval endpoints) or "uniform:T" (half-width).
        const auto second = spec.find(':', colon + 1);
        if (second == std::string::npos) return uniform(v);
        const double b = std::stod(spec.substr(second + 1));
        if (!(b > v)) throw std::invalid_argument("uniform prior: need A < B in " + spec);
        if (std::fabs(b + v) > 1e-12 * std::fabs(b - v))
            throw std::invalid_argument("uniform prior must be symmetric about 0: " + spec);
        return uniform(b);
    }
    throw std::invalid_argument("unrecognized prior spec: " + spec);
}

double PriorSpec::fisher_info() const {
    switch (kind) {
    case PriorKind::gaussian: return 1.0 / (param * param);
    case PriorKind::point_mass: return 0.0;
    case PriorKind::uniform:
        throw std::domain_error("uniform prior has no finite prior Fisher information");
    }
    return 0.0;
}

double van_trees_bound(const LocationFamily& family, std::int64_t n, const PriorSpec& prior) {
    if (n < 1) throw std::invalid_argument("van_trees_bound: n must be >= 1");
    const double f0 = family.pdf(0.0);
    if (!(f0 > 0.0)) throw std::domain_error("van_trees_bound: density vanishes at 0");
    return 1.0 / (4.0 * f0 * f0 * static_cast<double>(n) + prior.fisher_info());
}

double ceo_bound(const LocationFamily& family, std::int64_t n, const PriorSpec& prior) {
    if (family.kind() != FamilyKind::gaussian)
        throw std::domain_error("ceo_bound: Gaussian noise families only");
    if (prior.kind != PriorKind::gaussian)
        throw std::domain_error("ceo_bound: Gaussian priors only");
    if (n < 1) throw std::invalid_argument("ceo_bound: n must be >= 1");
    const double nd = static_cast<double>(n);
    const double s2 = family.scale() * family.scale();
    const double st2 = prior.param * prior.param;

    // Bracket: the unquantized Bayes MSE (rate = +inf) up to the prior
    // variance (rate = 0).
    double lo = std::max(1e-12, s2 * st2 / (nd * st2 + s2));
    double hi = st2;
    {
        // Monotonicity spot-check across the bracket.
        double prev = ceo_rate(lo * 1.0000001, nd, s2, st2);
        for (int k = 1; k <= 8; ++k) {
            const double D = lo + (hi - lo) * k / 8.0;
            const double r = ceo_rate(D, nd, s2, st2);
            if (!(r <= prev + 1e-9))
                throw std::runtime_error("ceo_bound: rate is not decreasing in D");
            prev = r;
        }
    }
    if (!(ceo_rate(hi, nd, s2, st2) <= nd))
        throw std::runtime_error("ceo_bound: bracket does not contain the root");
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (ceo_rate(mid, nd, s2, st2) > nd) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

double kappa(const LocationFamily& family, const ThresholdDensity& density, double theta) {
    if (!std::isfinite(theta)) throw std::invalid_argument("kappa: theta must be finite");
    double total = 0.0;
    for (std::size_t j = 0; j < density.size(); ++j)
        if (density.weights[j] > 0.0)
            total += density.weights[j] * family.eta(density.grid[j] - theta);
    return total;
}

double kappa_uniform(const LocationFamily& family, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("kappa_uniform: T must be positive");
    const double upper = std::min(2.0 * T, family.support_halfwidth());
    const double value =
        integrate([&](double t) { return family.in_open_support(t) ? family.eta(t) : 0.0; },
                  0.0, upper, 1e-10);
    return value / (2.0 * T);
}

double median_asymptotic_variance(const LocationFamily& family) {
    const double f0 = family.pdf(0.0);
    if (!(f0 > 0.0)) throw std::domain_error("median_asymptotic_variance: f(0) must be positive");
    return 1.0 / (4.0 * f0 * f0);
}

double are_of(const LocationFamily& family, double asymptotic_variance) {
    if (!(asymptotic_variance > 0.0))
        throw std::invalid_argument("are_of: variance must be positive");
    return 1.0 / (family.fisher_location() * asymptotic_variance);
}

std::string to_csv(const BoundReport& report) {
    std::string out = "grid,value,bound_kind\n";
    char buf[96];
    for (std::size_t i = 0; i < report.grid.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%s\n", report.grid[i],
                      report.values[i], bound_kind_name(report.bound_kind));
        out += buf;
    }
    return out;
}

} // namespace onebit
