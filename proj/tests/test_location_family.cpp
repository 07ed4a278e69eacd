#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>
#include <vector>

#include "onebit/location_family.hpp"
#include "oracles.hpp"

using onebit::FamilyKind;
using onebit::LocationFamily;

namespace {

const double kPi = std::numbers::pi;

std::vector<LocationFamily> all_families() {
    return {LocationFamily::gaussian(1.0), LocationFamily::gaussian(2.0),
            LocationFamily::laplace(1.0), LocationFamily::laplace(0.5),
            LocationFamily::gennorm(1.5, 1.0), LocationFamily::uniform(1.0)};
}

std::vector<double> support_grid(const LocationFamily& f, double mult, int points) {
    const double hw = std::min(mult * f.scale(), 0.999 * f.support_halfwidth());
    std::vector<double> xs;
    for (int i = 0; i < points; ++i)
        xs.push_back(-hw + 2.0 * hw * i / (points - 1));
    return xs;
}

} // namespace

TEST_CASE("pdf closed forms and symmetry") {
    const auto gauss = LocationFamily::gaussian(1.0);
    CHECK(gauss.pdf(0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * kPi)).epsilon(1e-12));
    CHECK(LocationFamily::laplace(1.0).pdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(gauss.pdf(1.0) == gauss.pdf(-1.0));
    for (const auto& f : all_families())
        for (double x : support_grid(f, 5.0, 41))
            CHECK(f.pdf(x) == doctest::Approx(f.pdf(-x)).epsilon(1e-12));
}

TEST_CASE("pdf integrates to one") {
    for (const auto& f : all_families()) {
        const double hw = std::min(40.0 * f.scale(), f.support_halfwidth());
        const double mass =
            oracle::simpson([&](double x) { return f.pdf(x); }, -hw, hw, 1e-11);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("log-concavity midpoint inequality") {
    for (const auto& f : all_families()) {
        const auto xs = support_grid(f, 4.0, 81);
        for (std::size_t i = 0; i < xs.size(); i += 3)
            for (std::size_t j = i; j < xs.size(); j += 5) {
                const double lhs = f.log_pdf(0.5 * (xs[i] + xs[j]));
                const double rhs = 0.5 * (f.log_pdf(xs[i]) + f.log_pdf(xs[j]));
                CHECK(lhs >= rhs - 1e-12);
            }
    }
}

TEST_CASE("cdf values") {
    for (const auto& f : all_families())
        CHECK(f.cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(LocationFamily::gaussian(1.0).cdf(2.0) ==
          doctest::Approx(oracle::kPhi2).epsilon(1e-14));
    CHECK(LocationFamily::laplace(1.0).cdf(-1.0) ==
          doctest::Approx(oracle::kLaplaceCdfM1).epsilon(1e-14));
    SUBCASE("monotone non-decreasing") {
        for (const auto& f : all_families()) {
            double prev = 0.0;
            for (double x : support_grid(f, 6.0, 101)) {
                CHECK(f.cdf(x) >= prev);
                prev = f.cdf(x);
            }
        }
    }
}

TEST_CASE("gennorm cdf matches an independent quadrature") {
    const auto g = LocationFamily::gennorm(1.5, 1.0);
    CHECK(g.pdf(0.0) == doctest::Approx(oracle::kGennorm15Pdf0).epsilon(1e-12));
    CHECK(g.cdf(1.0) == doctest::Approx(oracle::kGennorm15F1).epsilon(1e-10));
    CHECK(g.cdf(-2.0) == doctest::Approx(oracle::kGennorm15FM2).epsilon(1e-10));
    for (double x : {-3.0, -0.7, 0.3, 2.5}) {
        const double ref =
            0.5 + oracle::simpson([&](double u) { return g.pdf(u); }, 0.0, x, 1e-13);
        CHECK(g.cdf(x) == doctest::Approx(ref).epsilon(1e-10));
    }
}

TEST_CASE("gennorm shape 2 coincides with the gaussian") {
    const auto g = LocationFamily::gennorm(2.0, std::numbers::sqrt2);
    const auto n = LocationFamily::gaussian(1.0);
    for (double x : {-3.0, -1.0, -0.1, 0.0, 0.4, 2.0}) {
        CHECK(g.pdf(x) == doctest::Approx(n.pdf(x)).epsilon(1e-10));
        CHECK(g.cdf(x) == doctest::Approx(n.cdf(x)).epsilon(1e-10));
    }
    for (double p : {0.01, 0.3, 0.8})
        CHECK(g.quantile(p) == doctest::Approx(n.quantile(p)).epsilon(1e-8));
    CHECK(g.fisher_location() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("quantile inverts the cdf") {
    for (const auto& f : all_families()) {
        CHECK(f.quantile(0.5) == 0.0);
        for (double p : {0.001, 0.05, 0.3, 0.77, 0.999}) {
            CHECK(f.cdf(f.quantile(p)) == doctest::Approx(p).epsilon(1e-9));
            CHECK(f.quantile(p) == doctest::Approx(-f.quantile(1.0 - p)).epsilon(1e-9));
        }
    }
    CHECK(LocationFamily::gaussian(1.0).quantile(0.8413447461) ==
          doctest::Approx(1.0).epsilon(1e-8));
    CHECK_THROWS_AS((void)LocationFamily::gaussian(1.0).quantile(0.0), std::domain_error);
    CHECK_THROWS_AS((void)LocationFamily::gaussian(1.0).quantile(1.0), std::domain_error);
    SUBCASE("round trip through the cdf on a grid") {
        for (const auto& f : all_families())
            for (double x : support_grid(f, 5.0, 41)) {
                const double p = f.cdf(x);
                if (p <= 0.0 || p >= 1.0) continue;
                CHECK(f.cdf(f.quantile(p)) == doctest::Approx(p).epsilon(1e-8));
            }
    }
}

TEST_CASE("eta values and envelope") {
    const auto gauss = LocationFamily::gaussian(1.0);
    CHECK(gauss.eta(0.0) == doctest::Approx(2.0 / kPi).epsilon(1e-12));
    CHECK(gauss.eta(2.0) == doctest::Approx(oracle::kEta2).epsilon(1e-10));
    CHECK(LocationFamily::laplace(1.0).eta(0.0) == doctest::Approx(1.0).epsilon(1e-12));
    SUBCASE("matches the long-double oracle on a grid") {
        for (double x = -4.0; x <= 4.0; x += 0.37)
            CHECK(gauss.eta(x) ==
                  doctest::Approx(static_cast<double>(oracle::normal_eta(x))).epsilon(1e-11));
    }
    SUBCASE("symmetry and envelope") {
        for (const auto& f :
             {LocationFamily::gaussian(1.0), LocationFamily::laplace(1.0),
              LocationFamily::gennorm(1.5, 1.0)}) {
            const double ceiling = f.eta(0.0);
            for (double x : support_grid(f, 5.0, 81)) {
                CHECK(f.eta(x) == doctest::Approx(f.eta(-x)).epsilon(1e-11));
                CHECK(4.0 * f.pdf(x) * f.pdf(x) <= f.eta(x) * (1.0 + 1e-12));
                CHECK(f.eta(x) <= ceiling * (1.0 + 1e-12));
            }
        }
    }
    SUBCASE("vanishes in the tails") {
        CHECK(gauss.eta(10.0) < 1e-6 * gauss.eta(0.0));
    }
    SUBCASE("domain errors") {
        const auto u = LocationFamily::uniform(1.0);
        CHECK_THROWS_AS((void)u.eta(1.0), std::domain_error);
        CHECK_THROWS_AS((void)u.eta(-1.5), std::domain_error);
        CHECK(u.eta(0.0) == doctest::Approx(1.0).epsilon(1e-12)); // (1/2)^2 / (1/4)
    }
}

TEST_CASE("eta_delta") {
    const auto gauss = LocationFamily::gaussian(1.0);
    for (double x : {-2.0, -0.5, 0.0, 1.3})
        CHECK(gauss.eta_delta(x, 0.0) == doctest::Approx(gauss.eta(x)).epsilon(1e-12));
    CHECK(gauss.eta_delta(0.0, 1.0) == doctest::Approx(oracle::kEtaDelta01).epsilon(1e-12));
    SUBCASE("non-increasing in |x| for gaussian at delta in {0, 0.5, 1}") {
        for (double delta : {0.0, 0.5, 1.0}) {
            double prev = gauss.eta_delta(0.0, delta);
            for (int k = 1; k <= 200; ++k) {
                const double v = gauss.eta_delta(6.0 * k / 200.0, delta);
                CHECK(v <= prev + 1e-12);
                prev = v;
            }
        }
    }
}

TEST_CASE("hazard") {
    const auto gauss = LocationFamily::gaussian(1.0);
    CHECK(gauss.hazard(0.0) == doctest::Approx(2.0 * gauss.pdf(0.0)).epsilon(1e-12));
    CHECK(LocationFamily::laplace(1.0).hazard(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    SUBCASE("monotone non-decreasing") {
        for (const auto& f : all_families()) {
            double prev = 0.0;
            bool first = true;
            for (double x : support_grid(f, 5.0, 81)) {
                const double h = f.hazard(x);
                if (!first) CHECK(h >= prev * (1.0 - 1e-10));
                prev = h;
                first = false;
            }
        }
    }
}

TEST_CASE("fisher information") {
    CHECK(LocationFamily::gaussian(1.0).fisher_location() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(LocationFamily::gaussian(2.0).fisher_location() == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(LocationFamily::laplace(1.0).fisher_location() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(LocationFamily::gennorm(1.5, 1.0).fisher_location() ==
          doctest::Approx(oracle::kGennorm15Fisher).epsilon(1e-9));
    CHECK_THROWS_AS((void)LocationFamily::uniform(1.0).fisher_location(), std::domain_error);
    SUBCASE("never below the one-bit ceiling eta(0)") {
        for (const auto& f : all_families()) {
            if (f.kind() == FamilyKind::uniform) continue;
            CHECK(f.fisher_location() >= f.eta(0.0) * (1.0 - 1e-12));
        }
    }
}

TEST_CASE("variance closed forms") {
    CHECK(LocationFamily::gaussian(2.0).variance() == doctest::Approx(4.0));
    CHECK(LocationFamily::laplace(1.0).variance() == doctest::Approx(2.0));
    CHECK(LocationFamily::uniform(1.0).variance() == doctest::Approx(1.0 / 3.0));
    CHECK(LocationFamily::gennorm(1.5, 1.0).variance() ==
          doctest::Approx(oracle::kGennorm15Var).epsilon(1e-12));
}

TEST_CASE("deep-tail log computations stay finite") {
    const auto gauss = LocationFamily::gaussian(1.0);
    CHECK(std::isfinite(gauss.log_cdf(-30.0)));
    CHECK(std::isfinite(gauss.log_cdf(-100.0)));
    CHECK(gauss.log_cdf(-30.0) < gauss.log_cdf(-29.0));
    const auto g = LocationFamily::gennorm(1.5, 1.0);
    CHECK(std::isfinite(g.log_cdf(-200.0)));
    CHECK(g.log_cdf(-200.0) < g.log_cdf(-150.0));
    // strictly decreasing across the quadrature/asymptotic handover
    for (double x = -74.0; x >= -84.0; x -= 1.0)
        CHECK(g.log_cdf(x - 1.0) < g.log_cdf(x));
    // log-cdf agrees with cdf where both are representable
    for (double x : {-8.0, -3.0, -1.0, 0.0, 2.0})
        CHECK(gauss.log_cdf(x) == doctest::Approx(std::log(gauss.cdf(x))).epsilon(1e-11));
}

TEST_CASE("parse specs") {
    CHECK(LocationFamily::parse("gaussian:2.5").kind() == FamilyKind::gaussian);
    CHECK(LocationFamily::parse("gaussian:2.5").scale() == doctest::Approx(2.5));
    CHECK(LocationFamily::parse("laplace:0.5").kind() == FamilyKind::laplace);
    const auto g = LocationFamily::parse("gennorm:1.5:2");
    CHECK(g.kind() == FamilyKind::gennorm);
    CHECK(g.shape() == doctest::Approx(1.5));
    CHECK(g.scale() == doctest::Approx(2.0));
    CHECK(LocationFamily::parse("uniform:3").support_halfwidth() == doctest::Approx(3.0));
    CHECK_THROWS_AS(LocationFamily::parse("cauchy:1"), std::invalid_argument);
    CHECK_THROWS_AS(LocationFamily::parse("gaussian"), std::invalid_argument);
    CHECK_THROWS_AS(LocationFamily::parse("gaussian:abc"), std::invalid_argument);
    CHECK_THROWS_AS(LocationFamily::parse("gaussian:-1"), std::invalid_argument);
    CHECK(LocationFamily::parse("gennorm:1.5:2").name() == "gennorm:1.5:2");
}
