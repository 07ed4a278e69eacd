#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>
#include <vector>

#include "onebit/bounds.hpp"
#include "onebit/density_opt.hpp"
#include "onebit/rng.hpp"
#include "oracles.hpp"

using namespace onebit;

namespace {

const auto kGauss = LocationFamily::gaussian(1.0);

// Exhaustive search over the weight simplex on a fixed mesh; the
// independent check for tiny design problems.
double brute_force_minimax(const DesignProblem& p, int mesh) {
    const std::size_t mt = p.t_grid.size();
    const std::size_t mr = p.theta_grid.size();
    std::vector<double> payoff(mr * mt);
    for (std::size_t i = 0; i < mr; ++i)
        for (std::size_t j = 0; j < mt; ++j)
            payoff[i * mt + j] = p.family.eta(p.t_grid[j] - p.theta_grid[i]);

    REQUIRE(mt == 3);
    double best = -1.0;
    const double step = 1.0 / mesh;
    for (int a = 0; a <= mesh; ++a) {
        for (int b = 0; a + b <= mesh; ++b) {
            const double w0 = a * step, w1 = b * step, w2 = 1.0 - w0 - w1;
            double worst = 1e300;
            for (std::size_t i = 0; i < mr; ++i) {
                const double* row = payoff.data() + i * mt;
                worst = std::min(worst, w0 * row[0] + w1 * row[1] + w2 * row[2]);
            }
            best = std::max(best, worst);
        }
    }
    return best;
}

std::vector<double> random_simplex(Rng& rng, std::size_t m) {
    std::vector<double> w(m);
    double total = 0.0;
    for (auto& x : w) {
        x = -std::log(rng.uniform01());
        total += x;
    }
    for (auto& x : w) x /= total;
    return w;
}

} // namespace

TEST_CASE("minimax: single-theta problem is a point mass") {
    DesignProblem p{kGauss, {0.0}, {-1.0, -0.5, 0.0, 0.5, 1.0}, {}};
    const auto sol = solve_minimax_density(p, 1e-6);
    CHECK(sol.objective == doctest::Approx(kGauss.eta(0.0)).epsilon(1e-5));
    CHECK(sol.certificate <= 1e-6);
    CHECK(sol.density.weights[2] == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("minimax: narrow interval pins the endpoint precision") {
    // For T = 0.4 sigma the exact game value is eta(T): spreading mass
    // cannot raise min(kappa(T), kappa(-T)) above the point-mass value.
    const auto p = DesignProblem::minimax(kGauss, 0.4, 201);
    const auto sol = solve_minimax_density(p, 1e-4);
    CHECK(sol.certificate <= 1e-4);
    CHECK(sol.objective == doctest::Approx(oracle::kEta04).epsilon(5e-4));
}

TEST_CASE("minimax beats the uniform density" * doctest::timeout(300)) {
    for (double ratio : {0.2, 0.1}) {
        const double T = 1.0 / ratio;
        const auto p = DesignProblem::minimax(kGauss, T, 201);
        const auto sol = solve_minimax_density(p, 1e-3);
        CHECK(sol.certificate <= 1e-3);
        CHECK(sol.objective >= kappa_uniform(kGauss, T));
    }
}

TEST_CASE("minimax saddle certificates are consistent") {
    const auto p = DesignProblem::minimax(kGauss, 2.0, 101);
    const auto sol = solve_minimax_density(p, 1e-5);
    CHECK(sol.certificate <= 1e-5);
    // the attained worst case equals the reported objective
    CHECK(minimax_objective(p, sol.density.weights) ==
          doctest::Approx(sol.objective).epsilon(1e-10));
}

TEST_CASE("minimax matches brute force on a tiny instance") {
    DesignProblem p{kGauss, {-1.0, -0.3, 0.3, 1.0}, {-0.8, 0.0, 0.8}, {}};
    const auto sol = solve_minimax_density(p, 1e-6);
    const double brute = brute_force_minimax(p, 1000);
    CHECK(sol.objective == doctest::Approx(brute).epsilon(5e-3));
    CHECK(sol.objective >= brute - 5e-3); // mesh solutions are feasible
}

TEST_CASE("minimax objective is mirror symmetric") {
    const auto p = DesignProblem::minimax(kGauss, 3.0, 61);
    const auto sol = solve_minimax_density(p, 1e-5);
    std::vector<double> mirrored(sol.density.weights.rbegin(), sol.density.weights.rend());
    CHECK(minimax_objective(p, mirrored) ==
          doctest::Approx(minimax_objective(p, sol.density.weights)).epsilon(1e-5));
}

TEST_CASE("minimax failure carries the best iterate") {
    const auto p = DesignProblem::minimax(kGauss, 2.0, 41);
    try {
        (void)solve_minimax_density(p, 1e-300, 50);
        FAIL("expected SolverFailure");
    } catch (const SolverFailure& e) {
        CHECK(e.best().certificate > 0.0);
        CHECK(std::isfinite(e.best().objective));
        CHECK(e.best().density.weights.size() == 41);
    }
}

TEST_CASE("bayes: point-mass prior concentrates on the best atom") {
    DesignProblem p{kGauss, {0.0}, {}, {1.0}};
    for (double t = -2.0; t <= 2.0001; t += 0.02) p.t_grid.push_back(t);
    const auto sol = solve_bayes_density(p, 1e-9);
    CHECK(sol.objective == doctest::Approx(1.0 / kGauss.eta(0.0)).epsilon(1e-6));
    CHECK(sol.certificate <= 1e-9);
}

TEST_CASE("bayes: uniform prior improves on the uniform density" * doctest::timeout(300)) {
    const double T = std::sqrt(3.0); // prior variance T^2/3 = 1
    const auto p = DesignProblem::bayes_uniform_prior(kGauss, T, 101);
    const auto sol = solve_bayes_density(p, 1e-7);
    const std::vector<double> uniform_w(101, 1.0 / 101.0);
    CHECK(sol.objective <= bayes_objective(p, uniform_w) + 1e-9);
    CHECK(sol.certificate <= 1e-7);
    SUBCASE("local mass perturbations cannot help") {
        Rng rng(5);
        const auto& w = sol.density.weights;
        for (int probe = 0; probe < 60; ++probe) {
            const std::size_t from = rng.next_u64() % w.size();
            const std::size_t to = rng.next_u64() % w.size();
            if (from == to) continue;
            const double mass = 0.01 * w[from];
            if (mass <= 0.0) continue;
            std::vector<double> perturbed = w;
            perturbed[from] -= mass;
            perturbed[to] += mass;
            CHECK(bayes_objective(p, perturbed) >= sol.objective - 1e-7);
        }
    }
}

TEST_CASE("bayes objective is convex along random chords") {
    const auto p = DesignProblem::bayes_uniform_prior(kGauss, 2.0, 41);
    Rng rng(17);
    for (int rep = 0; rep < 100; ++rep) {
        const auto w1 = random_simplex(rng, 41);
        const auto w2 = random_simplex(rng, 41);
        std::vector<double> mid(41);
        for (std::size_t j = 0; j < 41; ++j) mid[j] = 0.5 * (w1[j] + w2[j]);
        CHECK(bayes_objective(p, mid) <=
              0.5 * (bayes_objective(p, w1) + bayes_objective(p, w2)) + 1e-9);
    }
}

TEST_CASE("bayes rejects zero-information prior atoms") {
    const auto uniform_family = LocationFamily::uniform(1.0);
    // theta atom at 5 sits outside every threshold's information range
    DesignProblem p{uniform_family, {0.0, 5.0}, {-0.5, 0.0, 0.5}, {0.5, 0.5}};
    CHECK_THROWS_AS(solve_bayes_density(p, 1e-6), std::invalid_argument);
}

TEST_CASE("kappa curve csv shape") {
    const auto p = DesignProblem::minimax(kGauss, 1.0, 11);
    const auto d = ThresholdDensity::point_mass(0.0);
    const auto csv = kappa_curve_csv(p, d);
    CHECK(csv.rfind("theta,kappa\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);
}
