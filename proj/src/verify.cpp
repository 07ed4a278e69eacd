#include "onebit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "onebit/bounds.hpp"
#include "onebit/parallel.hpp"
#include "onebit/rng.hpp"

namespace onebit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_vector(const std::vector<double>& xs) {
    std::string out = "[";
    char buf[40];
    for (std::size_t i = 0; i < xs.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%s%.17g", i ? "," : "", xs[i]);
        out += buf;
    }
    out += "]";
    return out;
}

double tail_pdf(const LocationFamily& family, double x) {
    if (std::isinf(x)) return 0.0;
    return family.pdf(x);
}

double tail_cdf(const LocationFamily& family, double x) {
    if (x == -kInf) return 0.0;
    if (x == kInf) return 1.0;
    return family.cdf(x);
}

// One evaluation of the lemma ratio; returns margin = LHS - max eta_delta,
// or -inf for skipped near-degenerate configurations.
double lemma_margin(const LocationFamily& family, double delta,
                    const std::vector<double>& sorted_desc) {
    double fsum = 0.0, Fsum = 0.0, max_eta = 0.0;
    double sign = 1.0;
    for (double x : sorted_desc) {
        fsum += sign * family.pdf(x);
        Fsum += sign * family.cdf(x);
        sign = -sign;
        if (family.in_open_support(x)) max_eta = std::max(max_eta, family.eta_delta(x, delta));
    }
    const double denom = std::fabs(Fsum) * std::fabs(1.0 - Fsum);
    if (denom < 1e-12) return -kInf;
    const double lhs = std::pow(std::fabs(fsum), 2.0 + delta) /
                       std::pow(denom, 1.0 + delta);
    return lhs - max_eta;
}

std::vector<std::vector<double>> adversarial_patterns(const LocationFamily& family) {
    const double s = family.kind() == FamilyKind::uniform ? 0.9 * family.scale()
                                                          : family.scale();
    std::vector<std::vector<double>> out = {
        {0.0},
        {s, s - 1e-9},
        {2 * s, 2 * s - 1e-9, -2 * s + 1e-9, -2 * s},
        {8 * s, 7.9999 * s},
        {8 * s, 0.5 * s, -0.5 * s, -8 * s},
        {8 * s, 8 * s - 1e-12, 1e-12, 0.0},
        {3 * s, s, -s, -3 * s},
        {s, s, -s, -s},
        {5 * s, 4 * s, 3 * s, 2 * s, s, 0.0},
        {1e-9, 0.0, -1e-9, -2e-9},
    };
    for (auto& v : out) std::sort(v.begin(), v.end(), std::greater<double>());
    return out;
}

} // namespace

IntervalUnion IntervalUnion::make(std::vector<double> endpoints) {
    if (endpoints.empty() || endpoints.size() % 2 != 0)
        throw std::invalid_argument("IntervalUnion: need an even, positive endpoint count");
    for (std::size_t i = 1; i < endpoints.size(); ++i)
        if (!(endpoints[i] >= endpoints[i - 1]))
            throw std::invalid_argument("IntervalUnion: endpoints must be sorted");
    for (std::size_t i = 1; i < endpoints.size(); ++i)
        if (std::isnan(endpoints[i]))
            throw std::invalid_argument("IntervalUnion: NaN endpoint");
    return {std::move(endpoints)};
}

IntervalUnion complement(const IntervalUnion& region) {
    std::vector<double> out;
    if (region.endpoints.front() != -kInf) {
        out.push_back(-kInf);
        out.push_back(region.endpoints.front());
    }
    for (std::size_t i = 1; i + 1 < region.endpoints.size(); i += 2) {
        out.push_back(region.endpoints[i]);
        out.push_back(region.endpoints[i + 1]);
    }
    if (region.endpoints.back() != kInf) {
        out.push_back(region.endpoints.back());
        out.push_back(kInf);
    }
    if (out.empty())
        throw std::invalid_argument("complement: region covers the whole line");
    return IntervalUnion::make(std::move(out));
}

ViolationReport check_interval_lemma(const LocationFamily& family, double delta,
                                     int n_max, std::int64_t trials, std::uint64_t seed) {
    if (n_max < 1 || n_max > 8)
        throw std::invalid_argument("check_interval_lemma: n_max must be in [1,8]");
    if (trials < 1) throw std::invalid_argument("check_interval_lemma: trials must be >= 1");
    const ViolationReport hypothesis =
        check_eta_delta_monotone(family, delta, 8.0 * family.scale(), 2001);
    if (hypothesis.violated(1e-10))
        throw std::invalid_argument(
            "check_interval_lemma: eta_delta is not non-increasing for this family");

    struct Slot {
        double margin = -kInf;
        std::vector<double> input;
    };
    std::vector<Slot> slots(static_cast<std::size_t>(trials));
    parallel_for(static_cast<std::size_t>(trials), [&](std::size_t k) {
        Rng rng(derive_seed(seed, 0x1e77a, k));
        const int n = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n_max));
        std::vector<double> xs(n);
        for (auto& x : xs) x = 3.0 * family.draw(rng);
        std::sort(xs.begin(), xs.end(), std::greater<double>());
        slots[k].margin = lemma_margin(family, delta, xs);
        if (slots[k].margin > -kInf) slots[k].input = std::move(xs);
    });

    ViolationReport report;
    report.trials = trials;
    report.max_lhs_minus_rhs = -kInf;
    for (auto& slot : slots) {
        if (slot.margin > report.max_lhs_minus_rhs) {
            report.max_lhs_minus_rhs = slot.margin;
            report.worst_case_input = format_vector(slot.input);
        }
    }
    for (const auto& xs : adversarial_patterns(family)) {
        if (static_cast<int>(xs.size()) > n_max) continue;
        const double margin = lemma_margin(family, delta, xs);
        ++report.trials;
        if (margin > report.max_lhs_minus_rhs) {
            report.max_lhs_minus_rhs = margin;
            report.worst_case_input = format_vector(xs);
        }
    }
    return report;
}

double bit_fisher_information(const LocationFamily& family, const IntervalUnion& region,
                              double theta) {
    double P = 0.0, dP = 0.0;
    for (std::size_t i = 0; i + 1 < region.endpoints.size(); i += 2) {
        const double a = region.endpoints[i];
        const double b = region.endpoints[i + 1];
        P += tail_cdf(family, b - theta) - tail_cdf(family, a - theta);
        dP += tail_pdf(family, a - theta) - tail_pdf(family, b - theta);
    }
    if (std::min(P, 1.0 - P) < 1e-14)
        throw std::domain_error("bit_fisher_information: degenerate detection region");
    return dP * dP / (P * (1.0 - P));
}

ViolationReport check_eta_monotone(const LocationFamily& family, double grid_halfwidth,
                                   int points) {
    return check_eta_delta_monotone(family, 0.0, grid_halfwidth, points);
}

ViolationReport check_eta_delta_monotone(const LocationFamily& family, double delta,
                                         double grid_halfwidth, int points) {
    if (points < 3) throw std::invalid_argument("check_eta_monotone: points must be >= 3");
    if (!(grid_halfwidth > 0.0))
        throw std::invalid_argument("check_eta_monotone: halfwidth must be positive");
    const double hw = std::min(grid_halfwidth, 0.999999 * family.support_halfwidth());
    ViolationReport report;
    report.trials = points;
    report.max_lhs_minus_rhs = -kInf;
    double prev = family.eta_delta(0.0, delta);
    // By symmetry it suffices to scan outward on the positive half-axis.
    const int half = points / 2;
    for (int k = 1; k <= half; ++k) {
        const double x = hw * static_cast<double>(k) / static_cast<double>(half);
        const double value = family.eta_delta(x, delta);
        const double increase = value - prev;
        if (increase > report.max_lhs_minus_rhs) {
            report.max_lhs_minus_rhs = increase;
            char buf[64];
            std::snprintf(buf, sizeof buf, "x=%.17g", x);
            report.worst_case_input = buf;
        }
        prev = value;
    }
    return report;
}

int kappa_equality_points(const LocationFamily& family, const ThresholdDensity& density,
                          const std::vector<double>& theta_grid) {
    if (!std::is_sorted(theta_grid.begin(), theta_grid.end()))
        throw std::invalid_argument("kappa_equality_points: theta grid must be sorted");
    const double ceiling = family.eta(0.0) - 1e-9;
    int clusters = 0;
    bool inside = false;
    for (double theta : theta_grid) {
        const bool hit = kappa(family, density, theta) >= ceiling;
        if (hit && !inside) ++clusters;
        inside = hit;
    }
    return clusters;
}

} // namespace onebit
