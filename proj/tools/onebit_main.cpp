#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "onebit/bounds.hpp"
#include "onebit/density_opt.hpp"
#include "onebit/harness.hpp"
#include "onebit/verify.hpp"

namespace {

using namespace onebit;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolation = 2;
constexpr int kExitNoConvergence = 3;

std::vector<std::int64_t> parse_int_list(const std::string& text) {
    std::vector<std::int64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoll(item));
    }
    if (out.empty()) throw CLI::ValidationError("--n", "empty integer list");
    return out;
}

std::string read_file(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw std::runtime_error("cannot open file: " + path);
    std::string text;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, got);
    std::fclose(f);
    return text;
}

Scheme parse_scheme(const std::string& text, double theta0, double gamma0,
                    double gamma_exp, std::int64_t n1, const std::string& density_path) {
    if (text == "sgd") return SgdAverageScheme{SgdConfig{gamma0, gamma_exp, theta0}};
    if (text == "one-round") return OneRoundScheme{theta0, n1};
    if (text == "mean") return BaselineMeanScheme{};
    if (text == "median") return BaselineMedianScheme{};
    if (text == "ml") {
        if (density_path.empty())
            throw CLI::ValidationError("--density", "the ml scheme needs a threshold density CSV");
        return MlThresholdDensityScheme{threshold_density_from_csv(read_file(density_path))};
    }
    if (text.rfind("fixed:", 0) == 0)
        return FixedThresholdScheme{std::stod(text.substr(6))};
    if (text.rfind("quantile:", 0) == 0)
        return QuantileInversionScheme{std::stod(text.substr(9))};
    throw CLI::ValidationError("--scheme", "unrecognized scheme: " + text);
}

ThetaSource parse_theta_source(const std::string& text) {
    if (text.rfind("point:", 0) == 0) return FixedTheta{std::stod(text.substr(6))};
    if (text.rfind("uniform:", 0) == 0) {
        const std::string rest = text.substr(8);
        const auto colon = rest.find(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("--prior", "uniform prior needs uniform:A:B");
        return UniformThetaPrior{std::stod(rest.substr(0, colon)),
                                 std::stod(rest.substr(colon + 1))};
    }
    throw CLI::ValidationError("--prior", "unrecognized theta prior: " + text);
}

struct SeedFlag {
    std::uint64_t value = 12345;
    bool given = false;
};

void add_seed_option(CLI::App* cmd, SeedFlag& seed) {
    cmd->add_option_function<std::uint64_t>(
           "--seed",
           [&seed](std::uint64_t v) {
               seed.value = v;
               seed.given = true;
           },
           "RNG seed; reruns with the same seed are byte-identical")
        ->default_str("12345");
}

void warn_if_defaulted(const SeedFlag& seed) {
    if (!seed.given)
        std::cerr << "warning: --seed not given, defaulting to " << seed.value << "\n";
}

int run_simulate(const std::string& family_spec, const std::string& scheme_spec,
                 const std::string& n_spec, std::int64_t trials, const std::string& prior_spec,
                 const SeedFlag& seed, double theta0, double gamma0, double gamma_exp,
                 std::int64_t n1, const std::string& density_path, const std::string& out,
                 const std::string& format) {
    warn_if_defaulted(seed);
    ExperimentConfig cfg;
    cfg.family = LocationFamily::parse(family_spec);
    cfg.scheme = parse_scheme(scheme_spec, theta0, gamma0, gamma_exp, n1, density_path);
    cfg.theta_source = parse_theta_source(prior_spec);
    cfg.n_list = parse_int_list(n_spec);
    cfg.trials = trials;
    cfg.seed = seed.value;
    const RiskCurve curve = run_risk_experiment(cfg);
    write_output(format == "json" ? to_json(curve) : to_csv(curve), out);
    return kExitOk;
}

int run_optimize(const std::string& family_spec, const std::string& mode, double T,
                 std::size_t points, const std::string& prior_spec, double tol,
                 long max_iters, const std::string& out, const std::string& kappa_out) {
    const LocationFamily family = LocationFamily::parse(family_spec);
    if (mode == "uniform") {
        // Baseline export: the uniform density over the grid, no solve.
        const DesignProblem problem = DesignProblem::minimax(family, T, points);
        const ThresholdDensity density = ThresholdDensity::uniform_grid(-T, T, points);
        write_output(to_csv(density), out);
        if (!kappa_out.empty()) write_output(kappa_curve_csv(problem, density), kappa_out);
        std::fprintf(stderr, "objective %.12g (uniform baseline)\n",
                     minimax_objective(problem, density.weights));
        return kExitOk;
    }
    DesignProblem problem =
        mode == "bayes"
            ? (prior_spec.rfind("gaussian:", 0) == 0
                   ? DesignProblem::bayes_gaussian_prior(family, T,
                                                         std::stod(prior_spec.substr(9)), points)
                   : DesignProblem::bayes_uniform_prior(family, T, points))
            : DesignProblem::minimax(family, T, points);
    const DesignSolution solution = mode == "bayes"
                                        ? solve_bayes_density(problem, tol, max_iters)
                                        : solve_minimax_density(problem, tol, max_iters);
    write_output(to_csv(solution.density), out);
    if (!kappa_out.empty()) write_output(kappa_curve_csv(problem, solution.density), kappa_out);
    std::fprintf(stderr, "objective %.12g certificate %.3g iterations %ld\n",
                 solution.objective, solution.certificate, solution.iterations);
    return kExitOk;
}

int run_bounds(const std::string& family_spec, const std::string& kind,
               const std::string& n_spec, const std::string& prior_spec, double T,
               std::size_t points, const std::string& density_path, const std::string& out) {
    const LocationFamily family = LocationFamily::parse(family_spec);
    BoundReport report;
    if (kind == "median-variance") {
        report.bound_kind = BoundKind::median_variance;
        report.grid = {0.0};
        report.values = {median_asymptotic_variance(family)};
    } else if (kind == "van-trees") {
        report.bound_kind = BoundKind::van_trees;
        const PriorSpec prior = PriorSpec::parse(prior_spec);
        for (auto n : parse_int_list(n_spec)) {
            report.grid.push_back(static_cast<double>(n));
            report.values.push_back(van_trees_bound(family, n, prior));
        }
    } else if (kind == "ceo") {
        report.bound_kind = BoundKind::ceo;
        const PriorSpec prior = PriorSpec::parse(prior_spec);
        for (auto n : parse_int_list(n_spec)) {
            report.grid.push_back(static_cast<double>(n));
            report.values.push_back(ceo_bound(family, n, prior));
        }
    } else if (kind == "kappa-uniform") {
        report.bound_kind = BoundKind::kappa_uniform;
        report.grid = {T};
        report.values = {kappa_uniform(family, T)};
    } else if (kind == "kappa-curve") {
        if (density_path.empty())
            throw CLI::ValidationError("--density", "kappa-curve needs a threshold density CSV");
        const ThresholdDensity density = threshold_density_from_csv(read_file(density_path));
        report.bound_kind = BoundKind::kappa_curve;
        for (std::size_t i = 0; i < points; ++i) {
            const double theta =
                -T + 2.0 * T * static_cast<double>(i) / static_cast<double>(points - 1);
            report.grid.push_back(theta);
            report.values.push_back(kappa(family, density, theta));
        }
    } else {
        throw CLI::ValidationError("--kind", "unrecognized bound kind: " + kind);
    }
    write_output(to_csv(report), out);
    return kExitOk;
}

int run_verify(const std::string& family_spec, const std::string& lemma, double delta,
               std::int64_t trials, int n_max, const SeedFlag& seed, double halfwidth,
               int points, double tol) {
    warn_if_defaulted(seed);
    const LocationFamily family = LocationFamily::parse(family_spec);
    bool any_violation = false;
    const auto row = [&](const char* name, bool violated, double margin) {
        std::printf("%-14s %-4s max_margin=%.3g\n", name, violated ? "FAIL" : "ok", margin);
        any_violation = any_violation || violated;
    };

    if (lemma == "interval" || lemma == "all") {
        const ViolationReport rep = check_interval_lemma(family, delta, n_max, trials, seed.value);
        row("interval", rep.violated(tol), rep.max_lhs_minus_rhs);
        if (rep.violated(tol))
            std::printf("  worst input: %s\n", rep.worst_case_input.c_str());
    }
    if (lemma == "fisher" || lemma == "all") {
        // Random interval unions (up to 3 intervals, endpoints from the
        // family scaled by 3) against the single-bit information ceiling.
        const double ceiling = 4.0 * family.pdf(0.0) * family.pdf(0.0);
        double max_margin = -1e300;
        Rng rng(derive_seed(seed.value, 0xf15e, 0));
        const std::int64_t fisher_trials = std::min<std::int64_t>(trials, 100000);
        for (std::int64_t k = 0; k < fisher_trials; ++k) {
            const int intervals = 1 + static_cast<int>(rng.next_u64() % 3);
            std::vector<double> pts(static_cast<std::size_t>(2 * intervals));
            for (auto& p : pts) p = 3.0 * family.draw(rng);
            std::sort(pts.begin(), pts.end());
            const double theta = family.draw(rng);
            try {
                const double info =
                    bit_fisher_information(family, IntervalUnion::make(pts), theta);
                max_margin = std::max(max_margin, info - ceiling);
            } catch (const std::domain_error&) {
                // degenerate region; skip
            }
        }
        row("fisher", max_margin > tol, max_margin);
    }
    if (lemma == "eta-monotone" || lemma == "all") {
        const ViolationReport rep = check_eta_monotone(family, halfwidth, points);
        row("eta-monotone", rep.violated(1e-10), rep.max_lhs_minus_rhs);
    }
    return any_violation ? kExitViolation : kExitOk;
}

int run_fast_rate(double halfwidth, std::int64_t n, std::int64_t trials, const SeedFlag& seed,
                  const std::string& out) {
    warn_if_defaulted(seed);
    const FastRateResult result = uniform_fast_rate_experiment(halfwidth, n, trials, seed.value);
    char buf[160];
    std::snprintf(buf, sizeof buf, "n,trials,failure_fraction,median_abs_error\n%lld,%lld,%.17g,%.17g\n",
                  static_cast<long long>(result.n), static_cast<long long>(result.trials),
                  result.failure_fraction, result.median_abs_error);
    write_output(buf, out);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"one-bit location estimation: simulators, bounds, and threshold design"};
    app.name("onebit");
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    // simulate ---------------------------------------------------------
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo risk curves for one-bit schemes");
    std::string sim_family = "gaussian:1";
    std::string sim_scheme = "sgd";
    std::string sim_n = "100,200,400,800";
    std::int64_t sim_trials = 10000;
    std::string sim_prior = "point:0";
    double sim_theta0 = 0.0, sim_gamma0 = 1.0, sim_gamma_exp = 0.75;
    std::int64_t sim_n1 = 0;
    std::string sim_density, sim_out = "-", sim_format = "csv";
    SeedFlag sim_seed;
    simulate->add_option("--family", sim_family, "family spec: gaussian:S, laplace:B, gennorm:P:A, uniform:W");
    simulate->add_option("--scheme", sim_scheme,
                         "sgd | one-round | fixed:T | quantile:T | ml | mean | median");
    simulate->add_option("--n", sim_n, "comma-separated sample sizes, increasing");
    simulate->add_option("--trials", sim_trials, "Monte Carlo replicates per sample size");
    simulate->add_option("--prior", sim_prior, "theta source: point:V or uniform:A:B");
    add_seed_option(simulate, sim_seed);
    simulate->add_option("--theta0", sim_theta0, "initial threshold / SGD start");
    simulate->add_option("--gamma0", sim_gamma0, "SGD stepsize scale");
    simulate->add_option("--gamma-exp", sim_gamma_exp, "SGD stepsize decay exponent, in (2/3,1)");
    simulate->add_option("--n1", sim_n1, "one-round first-stage size; 0 selects floor(sqrt(n))");
    simulate->add_option("--density", sim_density, "threshold density CSV for the ml scheme");
    simulate->add_option("--out", sim_out, "output path; - writes to stdout");
    simulate->add_option("--format", sim_format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));

    // optimize-density ---------------------------------------------------
    auto* optimize = app.add_subcommand("optimize-density", "minimax / Bayes threshold density design");
    std::string opt_family = "gaussian:1";
    std::string opt_mode = "minimax";
    double opt_T = 2.0;
    std::size_t opt_points = 201;
    std::string opt_prior = "uniform";
    double opt_tol = 1e-4;
    long opt_max_iters = 0;
    std::string opt_out = "-", opt_kappa_out;
    optimize->add_option("--family", opt_family, "family spec");
    optimize->add_option("--mode", opt_mode, "minimax | bayes | uniform (baseline, no solve)")
        ->check(CLI::IsMember({"minimax", "bayes", "uniform"}));
    optimize->add_option("--T", opt_T, "location interval half-width");
    optimize->add_option("--points", opt_points, "grid points over [-T, T]");
    optimize->add_option("--prior", opt_prior, "bayes prior: uniform or gaussian:SIGMA");
    optimize->add_option("--tol", opt_tol, "certificate tolerance");
    optimize->add_option("--max-iters", opt_max_iters, "iteration budget; 0 = built-in default");
    optimize->add_option("--out", opt_out, "density CSV path; - writes stdout");
    optimize->add_option("--kappa-out", opt_kappa_out, "optional kappa(theta) companion CSV path");

    // bounds ------------------------------------------------------------
    auto* bounds_cmd = app.add_subcommand("bounds", "closed-form and solver-backed lower bounds");
    std::string bnd_family = "gaussian:1";
    std::string bnd_kind = "median-variance";
    std::string bnd_n = "100";
    std::string bnd_prior = "point:0";
    double bnd_T = 2.0;
    std::size_t bnd_points = 201;
    std::string bnd_density, bnd_out = "-";
    bounds_cmd->add_option("--family", bnd_family, "family spec");
    bounds_cmd->add_option("--kind", bnd_kind,
                           "median-variance | van-trees | ceo | kappa-uniform | kappa-curve");
    bounds_cmd->add_option("--n", bnd_n, "comma-separated sample sizes (van-trees, ceo)");
    bounds_cmd->add_option("--prior", bnd_prior, "prior: gaussian:S | point:V");
    bounds_cmd->add_option("--T", bnd_T, "interval half-width (kappa kinds)");
    bounds_cmd->add_option("--points", bnd_points, "theta grid points (kappa-curve)");
    bounds_cmd->add_option("--density", bnd_density, "threshold density CSV (kappa-curve)");
    bounds_cmd->add_option("--out", bnd_out, "output path; - writes stdout");

    // verify -------------------------------------------------------------
    auto* verify_cmd = app.add_subcommand("verify", "numeric checks of the structural inequalities");
    std::string ver_family = "gaussian:1";
    std::string ver_lemma = "all";
    double ver_delta = 0.0;
    std::int64_t ver_trials = 100000;
    int ver_n_max = 6;
    double ver_halfwidth = 6.0;
    int ver_points = 2001;
    double ver_tol = 1e-9;
    SeedFlag ver_seed;
    verify_cmd->add_option("--family", ver_family, "family spec");
    verify_cmd->add_option("--lemma", ver_lemma, "interval | fisher | eta-monotone | all")
        ->check(CLI::IsMember({"interval", "fisher", "eta-monotone", "all"}));
    verify_cmd->add_option("--delta", ver_delta, "exponent shift of the envelope inequality");
    verify_cmd->add_option("--trials", ver_trials, "random trials per check");
    verify_cmd->add_option("--n-max", ver_n_max, "largest alternating-sum length (<= 8)");
    add_seed_option(verify_cmd, ver_seed);
    verify_cmd->add_option("--halfwidth", ver_halfwidth, "grid half-width for the eta scan");
    verify_cmd->add_option("--points", ver_points, "grid points for the eta scan");
    verify_cmd->add_option("--tol", ver_tol, "violation tolerance");

    // fast-rate -----------------------------------------------------------
    auto* fast = app.add_subcommand("fast-rate", "two-stage uniform-family estimator experiment");
    double fr_halfwidth = 1.0;
    std::int64_t fr_n = 10000;
    std::int64_t fr_trials = 10000;
    std::string fr_out = "-";
    SeedFlag fr_seed;
    fast->add_option("--halfwidth", fr_halfwidth, "uniform support half-width");
    fast->add_option("--n", fr_n, "per-stage sample size (2n observations total)");
    fast->add_option("--trials", fr_trials, "Monte Carlo replicates");
    add_seed_option(fast, fr_seed);
    fast->add_option("--out", fr_out, "output path; - writes stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (simulate->parsed())
            return run_simulate(sim_family, sim_scheme, sim_n, sim_trials, sim_prior, sim_seed,
                                sim_theta0, sim_gamma0, sim_gamma_exp, sim_n1, sim_density,
                                sim_out, sim_format);
        if (optimize->parsed())
            return run_optimize(opt_family, opt_mode, opt_T, opt_points, opt_prior, opt_tol,
                                opt_max_iters, opt_out, opt_kappa_out);
        if (bounds_cmd->parsed())
            return run_bounds(bnd_family, bnd_kind, bnd_n, bnd_prior, bnd_T, bnd_points,
                              bnd_density, bnd_out);
        if (verify_cmd->parsed())
            return run_verify(ver_family, ver_lemma, ver_delta, ver_trials, ver_n_max, ver_seed,
                              ver_halfwidth, ver_points, ver_tol);
        if (fast->parsed())
            return run_fast_rate(fr_halfwidth, fr_n, fr_trials, fr_seed, fr_out);
    } catch (const onebit::SolverFailure& e) {
        std::cerr << "error: " << e.what() << " (best certificate " << e.best().certificate
                  << ")\n";
        return kExitNoConvergence;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
