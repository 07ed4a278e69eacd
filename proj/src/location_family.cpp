#include "onebit/location_family.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "onebit/quadrature.hpp"

namespace onebit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite argument");
}

// Inverse standard normal CDF: Acklam's rational approximation refined by
// one Halley step against erfc, accurate to a few ulps.
double std_normal_quantile(double p) {
    static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Halley refinement: e = Phi(x) - p, u = e / phi(x). Skipped in the
    // extreme subnormal tail where 1/phi(x) overflows.
    const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    const double u = e * std::numbers::sqrt2 * std::sqrt(std::numbers::pi) *
                     std::exp(0.5 * x * x);
    if (std::isfinite(u)) x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

double std_normal_log_cdf(double z) {
    if (z > -25.0) return std::log(0.5 * std::erfc(-z / std::numbers::sqrt2));
    // Mills-ratio asymptotic for the deep lower tail.
    const double z2 = z * z;
    const double series = -1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2);
    return -0.5 * z2 - kLogSqrt2Pi - std::log(-z) + std::log1p(series);
}

} // namespace

LocationFamily::LocationFamily(FamilyKind kind, double scale, double shape)
    : kind_(kind), scale_(scale), shape_(shape), log_norm_(0.0) {
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw std::invalid_argument("LocationFamily: scale must be positive");
    if (kind_ == FamilyKind::gennorm) {
        if (!(shape >= 1.0) || !std::isfinite(shape))
            throw std::invalid_argument("LocationFamily: gennorm shape must be >= 1");
        log_norm_ = std::log(shape) - std::log(2.0 * scale) - std::lgamma(1.0 / shape);
    }
}

LocationFamily LocationFamily::gaussian(double sigma) {
    return {FamilyKind::gaussian, sigma, 0.0};
}
LocationFamily LocationFamily::laplace(double b) {
    return {FamilyKind::laplace, b, 0.0};
}
LocationFamily LocationFamily::gennorm(double shape, double alpha) {
    return {FamilyKind::gennorm, alpha, shape};
}
LocationFamily LocationFamily::uniform(double halfwidth) {
    return {FamilyKind::uniform, halfwidth, 0.0};
}

LocationFamily LocationFamily::parse(std::string_view spec) {
    const auto fail = [&] {
        throw std::invalid_argument("unrecognized family spec: " + std::string(spec));
    };
    const auto split = [](std::string_view s, char sep) {
        std::vector<std::string> out;
        std::size_t start = 0;
        while (true) {
            const auto pos = s.find(sep, start);
            if (pos == std::string_view::npos) {
                out.emplace_back(s.substr(start));
                break;
            }
            out.emplace_back(s.substr(start, pos - start));
            start = pos + 1;
        }
        return out;
    };
    const auto parts = split(spec, ':');
    const auto num = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            fail();
        }
        if (used != s.size()) fail();
        return v;
    };
    if (parts.size() == 2 && parts[0] == "gaussian") return gaussian(num(parts[1]));
    if (parts.size() == 2 && parts[0] == "laplace") return laplace(num(parts[1]));
    if (parts.size() == 3 && parts[0] == "gennorm") return gennorm(num(parts[1]), num(parts[2]));
    if (parts.size() == 2 && parts[0] == "uniform") return uniform(num(parts[1]));
    fail();
    return gaussian(1.0); // unreachable
}

std::string LocationFamily::name() const {
    char buf[64];
    switch (kind_) {
    case FamilyKind::gaussian: std::snprintf(buf, sizeof buf, "gaussian:%g", scale_); break;
    case FamilyKind::laplace: std::snprintf(buf, sizeof buf, "laplace:%g", scale_); break;
    case FamilyKind::gennorm: std::snprintf(buf, sizeof buf, "gennorm:%g:%g", shape_, scale_); break;
    case FamilyKind::uniform: std::snprintf(buf, sizeof buf, "uniform:%g", scale_); break;
    }
    return buf;
}

double LocationFamily::support_halfwidth() const {
    return kind_ == FamilyKind::uniform ? scale_ : kInf;
}

bool LocationFamily::in_open_support(double x) const {
    if (!std::isfinite(x)) return false;
    return kind_ != FamilyKind::uniform || std::fabs(x) < scale_;
}

double LocationFamily::pdf(double x) const {
    require_finite(x, "pdf");
    switch (kind_) {
    case FamilyKind::gaussian: {
        const double z = x / scale_;
        return std::exp(-0.5 * z * z) / (scale_ * std::sqrt(2.0 * std::numbers::pi));
    }
    case FamilyKind::laplace:
        return 0.5 / scale_ * std::exp(-std::fabs(x) / scale_);
    case FamilyKind::gennorm:
        return std::exp(log_norm_ - std::pow(std::fabs(x) / scale_, shape_));
    case FamilyKind::uniform:
        return std::fabs(x) < scale_ ? 0.5 / scale_ : 0.0;
    }
    return 0.0;
}

double LocationFamily::log_pdf(double x) const {
    require_finite(x, "log_pdf");
    switch (kind_) {
    case FamilyKind::gaussian: {
        const double z = x / scale_;
        return -0.5 * z * z - kLogSqrt2Pi - std::log(scale_);
    }
    case FamilyKind::laplace:
        return -std::fabs(x) / scale_ - std::log(2.0 * scale_);
    case FamilyKind::gennorm:
        return log_norm_ - std::pow(std::fabs(x) / scale_, shape_);
    case FamilyKind::uniform:
        return std::fabs(x) < scale_ ? -std::log(2.0 * scale_) : -kInf;
    }
    return -kInf;
}

double LocationFamily::cdf(double x) const {
    require_finite(x, "cdf");
    switch (kind_) {
    case FamilyKind::gaussian:
        return 0.5 * std::erfc(-x / (scale_ * std::numbers::sqrt2));
    case FamilyKind::laplace:
        return x <= 0.0 ? 0.5 * std::exp(x / scale_)
                        : 1.0 - 0.5 * std::exp(-x / scale_);
    case FamilyKind::gennorm: {
        if (x == 0.0) return 0.5;
        // Lower-tail mass computed as a right-tail integral of the
        // reflected density; avoids cancellation near probability 1.
        const double t = std::fabs(x);
        const double s = std::pow(t / scale_, shape_);
        double tail;
        if (s > 690.0) {
            tail = std::exp(log_cdf(-t));
        } else {
            tail = integrate_right_tail([this](double u) { return pdf(u); }, t,
                                        scale_, 1e-14);
        }
        return x < 0.0 ? tail : 1.0 - tail;
    }
    case FamilyKind::uniform:
        if (x <= -scale_) return 0.0;
        if (x >= scale_) return 1.0;
        return 0.5 * (x / scale_ + 1.0);
    }
    return 0.0;
}

double LocationFamily::log_cdf(double x) const {
    require_finite(x, "log_cdf");
    switch (kind_) {
    case FamilyKind::gaussian:
        return std_normal_log_cdf(x / scale_);
    case FamilyKind::laplace:
        return x <= 0.0 ? x / scale_ - std::numbers::ln2
                        : std::log1p(-0.5 * std::exp(-x / scale_));
    case FamilyKind::gennorm: {
        if (x >= 0.0) return std::log(cdf(x));
        const double t = -x;
        const double s = std::pow(t / scale_, shape_);
        if (s <= 690.0) return std::log(cdf(x));
        // Watson-lemma asymptotic of the tail integral.
        const double a = 1.0 / shape_; // Gamma(a, s) expansion parameter
        return -s + (a - 1.0) * std::log(s) - std::numbers::ln2 -
               std::lgamma(a) + std::log1p((a - 1.0) / s);
    }
    case FamilyKind::uniform:
        if (x <= -scale_) return -kInf;
        return std::log(cdf(x));
    }
    return -kInf;
}

double LocationFamily::quantile(double p) const {
    if (!(p > 0.0) || !(p < 1.0))
        throw std::domain_error("quantile: p must lie strictly inside (0,1)");
    if (p == 0.5) return 0.0;
    switch (kind_) {
    case FamilyKind::gaussian:
        return scale_ * std_normal_quantile(p);
    case FamilyKind::laplace:
        return p < 0.5 ? scale_ * std::log(2.0 * p)
                       : -scale_ * std::log(2.0 * (1.0 - p));
    case FamilyKind::uniform:
        return scale_ * (2.0 * p - 1.0);
    case FamilyKind::gennorm: {
        // Solve on the lower tail by symmetry: find t >= 0 with F(-t) = q.
        const double q = std::min(p, 1.0 - p);
        double lo = 0.0;
        double hi = scale_;
        while (cdf(-hi) > q) hi *= 2.0;
        for (int i = 0; i < 40; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (cdf(-mid) > q) lo = mid; else hi = mid;
        }
        double t = 0.5 * (lo + hi);
        for (int i = 0; i < 4; ++i) {
            const double fx = pdf(t);
            if (fx <= 0.0) break;
            t += (cdf(-t) - q) / fx;
        }
        return p < 0.5 ? -t : t;
    }
    }
    return 0.0;
}

double LocationFamily::eta(double x) const {
    if (!in_open_support(x))
        throw std::domain_error("eta: x outside the open support");
    return std::exp(2.0 * log_pdf(x) - log_cdf(x) - log_cdf(-x));
}

double LocationFamily::eta_delta(double x, double delta) const {
    if (!in_open_support(x))
        throw std::domain_error("eta_delta: x outside the open support");
    if (delta < 0.0) throw std::invalid_argument("eta_delta: delta must be >= 0");
    return std::exp((2.0 + delta) * log_pdf(x) -
                    (1.0 + delta) * (log_cdf(x) + log_cdf(-x)));
}

double LocationFamily::hazard(double x) const {
    if (!in_open_support(x))
        throw std::domain_error("hazard: x outside the open support");
    return std::exp(log_pdf(x) - log_cdf(-x));
}

double LocationFamily::fisher_location() const {
    switch (kind_) {
    case FamilyKind::gaussian:
        return 1.0 / (scale_ * scale_);
    case FamilyKind::laplace:
        return 1.0 / (scale_ * scale_);
    case FamilyKind::gennorm: {
        // E[(f'/f)^2] = (p/alpha)^2 E |x/alpha|^(2p-2), by quadrature.
        const double p = shape_;
        const double c = p / scale_;
        const auto integrand = [&](double x) {
            const double z = std::fabs(x) / scale_;
            return c * c * std::pow(z, 2.0 * p - 2.0) * pdf(x);
        };
        const double upper = scale_ * std::pow(700.0, 1.0 / p);
        return 2.0 * integrate(integrand, 0.0, upper, 1e-12);
    }
    case FamilyKind::uniform:
        throw std::domain_error("fisher_location: undefined for the uniform family");
    }
    return 0.0;
}

double LocationFamily::variance() const {
    switch (kind_) {
    case FamilyKind::gaussian: return scale_ * scale_;
    case FamilyKind::laplace: return 2.0 * scale_ * scale_;
    case FamilyKind::gennorm:
        return scale_ * scale_ *
               std::exp(std::lgamma(3.0 / shape_) - std::lgamma(1.0 / shape_));
    case FamilyKind::uniform: return scale_ * scale_ / 3.0;
    }
    return 0.0;
}

} // namespace onebit
