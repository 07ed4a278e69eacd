#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <limits>

#include "onebit/verify.hpp"
#include "oracles.hpp"

using namespace onebit;

namespace {
const auto kGauss = LocationFamily::gaussian(1.0);
const double kInf = std::numeric_limits<double>::infinity();
} // namespace

TEST_CASE("interval union validation and complement") {
    CHECK_THROWS_AS(IntervalUnion::make({1.0}), std::invalid_argument);
    CHECK_THROWS_AS(IntervalUnion::make({1.0, 0.0}), std::invalid_argument);
    const auto region = IntervalUnion::make({-1.0, 0.0, 2.0, 3.0});
    CHECK(region.interval_count() == 2);
    const auto comp = complement(region);
    CHECK(comp.endpoints == std::vector<double>{-kInf, -1.0, 0.0, 2.0, 3.0, kInf});
    const auto half_line = IntervalUnion::make({-kInf, 0.5});
    CHECK(complement(half_line).endpoints == std::vector<double>{0.5, kInf});
}

TEST_CASE("single-bit fisher information") {
    SUBCASE("median split attains the ceiling") {
        const auto region = IntervalUnion::make({-kInf, 0.3});
        const double info = bit_fisher_information(kGauss, region, 0.3);
        CHECK(info == doctest::Approx(4.0 * kGauss.pdf(0.0) * kGauss.pdf(0.0)).epsilon(1e-12));
        CHECK(info == doctest::Approx(kGauss.eta(0.0)).epsilon(1e-12));
    }
    SUBCASE("offset half-line matches eta") {
        const auto region = IntervalUnion::make({2.0, kInf});
        CHECK(bit_fisher_information(kGauss, region, 0.0) ==
              doctest::Approx(oracle::kEta2).epsilon(1e-10));
        for (double t : {-1.5, -0.2, 0.6, 2.4}) {
            const auto r = IntervalUnion::make({t, kInf});
            for (double theta : {-0.7, 0.0, 1.1})
                CHECK(bit_fisher_information(kGauss, r, theta) ==
                      doctest::Approx(kGauss.eta(t - theta)).epsilon(1e-11));
        }
    }
    SUBCASE("complement invariance") {
        const auto region = IntervalUnion::make({-0.5, 0.25, 1.0, 2.0});
        const double a = bit_fisher_information(kGauss, region, 0.1);
        const double b = bit_fisher_information(kGauss, complement(region), 0.1);
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
    SUBCASE("random interval unions never beat eta(0)") {
        Rng rng(71);
        const double ceiling = 4.0 * kGauss.pdf(0.0) * kGauss.pdf(0.0);
        int evaluated = 0;
        for (int rep = 0; rep < 10000; ++rep) {
            const int k = 1 + static_cast<int>(rng.next_u64() % 3);
            std::vector<double> pts(static_cast<std::size_t>(2 * k));
            for (auto& x : pts) x = 3.0 * kGauss.draw(rng);
            std::sort(pts.begin(), pts.end());
            const double theta = kGauss.draw(rng);
            try {
                const double info =
                    bit_fisher_information(kGauss, IntervalUnion::make(pts), theta);
                CHECK(info <= ceiling + 1e-9);
                ++evaluated;
            } catch (const std::domain_error&) {
            }
        }
        CHECK(evaluated > 9000);
    }
    SUBCASE("degenerate regions are rejected") {
        const auto empty_ish = IntervalUnion::make({50.0, 51.0});
        CHECK_THROWS_AS((void)bit_fisher_information(kGauss, empty_ish, 0.0),
                        std::domain_error);
        const auto everything = IntervalUnion::make({-kInf, kInf});
        CHECK_THROWS_AS((void)bit_fisher_information(kGauss, everything, 0.0),
                        std::domain_error);
    }
}

TEST_CASE("alternating-sum envelope check") {
    SUBCASE("gaussian, delta 0") {
        const auto rep = check_interval_lemma(kGauss, 0.0, 6, 20000, 11);
        CHECK(rep.trials >= 20000);
        // the singleton {0} pattern attains equality, so the max margin is
        // pinned near zero from below
        CHECK(rep.max_lhs_minus_rhs <= 1e-9);
        CHECK(rep.max_lhs_minus_rhs >= -1e-12);
    }
    SUBCASE("laplace, delta 0.5") {
        const auto rep = check_interval_lemma(LocationFamily::laplace(1.0), 0.5, 6, 20000, 12);
        CHECK(rep.max_lhs_minus_rhs <= 1e-9);
    }
    SUBCASE("hypothesis gate rejects families with non-monotone eta_delta") {
        CHECK_THROWS_AS(
            check_interval_lemma(LocationFamily::uniform(1.0), 0.0, 4, 10, 1),
            std::invalid_argument);
        CHECK_THROWS_AS(
            check_interval_lemma(LocationFamily::gennorm(3.0, 1.0), 0.0, 4, 10, 1),
            std::invalid_argument);
    }
    SUBCASE("argument validation") {
        CHECK_THROWS_AS(check_interval_lemma(kGauss, 0.0, 9, 10, 1), std::invalid_argument);
        CHECK_THROWS_AS(check_interval_lemma(kGauss, 0.0, 4, 0, 1), std::invalid_argument);
    }
}

TEST_CASE("eta monotonicity scan") {
    SUBCASE("holds for gaussian and mid-shape gennorm") {
        CHECK_FALSE(check_eta_monotone(kGauss, 6.0, 2001).violated(1e-10));
        CHECK_FALSE(check_eta_monotone(LocationFamily::gennorm(1.5, 1.0), 6.0, 2001)
                        .violated(1e-10));
        CHECK_FALSE(check_eta_monotone(LocationFamily::laplace(1.0), 6.0, 2001)
                        .violated(1e-10));
    }
    SUBCASE("fails for shape 3") {
        const auto rep = check_eta_monotone(LocationFamily::gennorm(3.0, 1.0), 4.0, 2001);
        CHECK(rep.violated(1e-10));
        CHECK(rep.max_lhs_minus_rhs > 0.0);
    }
    SUBCASE("fails for the uniform family") {
        CHECK(check_eta_monotone(LocationFamily::uniform(1.0), 2.0, 801).violated(1e-10));
    }
}

TEST_CASE("near-ceiling kappa clusters") {
    std::vector<double> grid;
    for (int k = -200; k <= 200; ++k) grid.push_back(k * 0.01);
    SUBCASE("single atom: one cluster at the atom") {
        const auto d = ThresholdDensity::point_mass(0.0);
        CHECK(kappa_equality_points(kGauss, d, grid) == 1);
    }
    SUBCASE("two atoms at +-1: mixture never reaches the ceiling") {
        const auto d = ThresholdDensity::make({-1.0, 1.0}, {0.5, 0.5});
        CHECK(kappa_equality_points(kGauss, d, grid) == 0);
    }
    SUBCASE("spread uniform atoms: no equality points") {
        const auto d = ThresholdDensity::uniform_grid(-1.0, 1.0, 51);
        CHECK(kappa_equality_points(kGauss, d, grid) == 0);
    }
}
