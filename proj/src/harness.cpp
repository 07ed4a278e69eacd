#include "onebit/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <json.hpp>

#include "onebit/parallel.hpp"

namespace onebit {
namespace {

struct TrialOutcome {
    double sq_err = 0.0;
    bool failed = false;
};

double draw_theta(const ThetaSource& source, Rng& rng) {
    if (const auto* fixed = std::get_if<FixedTheta>(&source)) return fixed->theta;
    const auto& prior = std::get<UniformThetaPrior>(source);
    return rng.uniform(prior.lo, prior.hi);
}

TrialOutcome run_trial(const ExperimentConfig& cfg, std::int64_t n, std::uint64_t trial_seed) {
    Rng rng(trial_seed);
    const double theta = draw_theta(cfg.theta_source, rng);
    const auto draw = [&] { return theta + cfg.family.draw(rng); };

    TrialOutcome out;
    double theta_hat = 0.0;

    if (const auto* s = std::get_if<FixedThresholdScheme>(&cfg.scheme)) {
        std::int64_t ones = 0;
        for (std::int64_t i = 0; i < n; ++i) ones += encode_fixed_threshold(draw(), s->t0);
        theta_hat = quantile_inversion_from_counts(ones, n, s->t0, cfg.family).theta_hat;
    } else if (const auto* s = std::get_if<QuantileInversionScheme>(&cfg.scheme)) {
        std::int64_t ones = 0;
        for (std::int64_t i = 0; i < n; ++i) ones += encode_fixed_threshold(draw(), s->theta0);
        theta_hat = quantile_inversion_from_counts(ones, n, s->theta0, cfg.family).theta_hat;
    } else if (const auto* s = std::get_if<SgdAverageScheme>(&cfg.scheme)) {
        double iterate = s->cfg.theta_init;
        double sum = 0.0;
        for (std::int64_t i = 1; i <= n; ++i) {
            const int bit = draw() > iterate ? 1 : -1;
            iterate += s->cfg.gamma(i) * bit;
            sum += iterate;
        }
        theta_hat = sum / static_cast<double>(n);
    } else if (const auto* s = std::get_if<OneRoundScheme>(&cfg.scheme)) {
        const std::int64_t n1 =
            s->n1_fixed > 0 ? s->n1_fixed
                            : static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(n))));
        std::int64_t ones = 0;
        for (std::int64_t i = 0; i < n1; ++i) ones += encode_fixed_threshold(draw(), s->theta0);
        const double p1 =
            clamp_bit_fraction(static_cast<double>(ones) / static_cast<double>(n1), n1);
        const double t_n = s->theta0 - cfg.family.quantile(p1);
        std::int64_t ones2 = 0;
        for (std::int64_t i = n1; i < n; ++i) ones2 += encode_fixed_threshold(draw(), t_n);
        theta_hat = quantile_inversion_from_counts(ones2, n - n1, t_n, cfg.family).theta_hat;
    } else if (const auto* s = std::get_if<MlThresholdDensityScheme>(&cfg.scheme)) {
        const auto& density = s->density;
        std::vector<double> cumulative(density.size());
        double acc = 0.0;
        for (std::size_t j = 0; j < density.size(); ++j) {
            acc += density.weights[j];
            cumulative[j] = acc;
        }
        cumulative.back() = 1.0;
        std::vector<ThresholdCounts> groups(density.size());
        for (std::size_t j = 0; j < density.size(); ++j) groups[j].t = density.grid[j];
        for (std::int64_t i = 0; i < n; ++i) {
            const std::size_t j = rng.discrete(cumulative.data(), cumulative.size());
            groups[j].n += 1;
            groups[j].ones += encode_fixed_threshold(draw(), density.grid[j]);
        }
        std::erase_if(groups, [](const ThresholdCounts& g) { return g.n == 0; });
        const EstimateResult res =
            estimate_ml_grouped(groups, cfg.family, default_theta_bounds(cfg.family));
        theta_hat = res.theta_hat;
        out.failed = res.degenerate;
    } else if (std::holds_alternative<BaselineMeanScheme>(cfg.scheme)) {
        double sum = 0.0;
        for (std::int64_t i = 0; i < n; ++i) sum += draw();
        theta_hat = sum / static_cast<double>(n);
    } else {
        std::vector<double> xs(static_cast<std::size_t>(n));
        for (auto& x : xs) x = draw();
        const auto mid = xs.begin() + n / 2;
        std::nth_element(xs.begin(), mid, xs.end());
        if (n % 2 == 1) {
            theta_hat = *mid;
        } else {
            const double upper = *mid;
            theta_hat = 0.5 * (*std::max_element(xs.begin(), mid) + upper);
        }
    }

    if (!out.failed) {
        const double err = theta_hat - theta;
        out.sq_err = err * err;
    }
    return out;
}

} // namespace

std::string scheme_label(const Scheme& scheme) {
    char buf[64];
    if (const auto* s = std::get_if<FixedThresholdScheme>(&scheme)) {
        std::snprintf(buf, sizeof buf, "fixed:%g", s->t0);
        return buf;
    }
    if (const auto* s = std::get_if<QuantileInversionScheme>(&scheme)) {
        std::snprintf(buf, sizeof buf, "quantile:%g", s->theta0);
        return buf;
    }
    if (std::holds_alternative<SgdAverageScheme>(scheme)) return "sgd";
    if (std::holds_alternative<OneRoundScheme>(scheme)) return "one-round";
    if (std::holds_alternative<MlThresholdDensityScheme>(scheme)) return "ml";
    if (std::holds_alternative<BaselineMeanScheme>(scheme)) return "mean";
    return "median";
}

void ExperimentConfig::validate() const {
    if (n_list.empty()) throw std::invalid_argument("ExperimentConfig: empty n list");
    if (!std::is_sorted(n_list.begin(), n_list.end()))
        throw std::invalid_argument("ExperimentConfig: n list must be increasing");
    for (auto n : n_list)
        if (n < 1) throw std::invalid_argument("ExperimentConfig: n values must be >= 1");
    if (trials < 1) throw std::invalid_argument("ExperimentConfig: trials must be >= 1");
    if (const auto* s = std::get_if<SgdAverageScheme>(&scheme)) s->cfg.validate();
    if (const auto* s = std::get_if<OneRoundScheme>(&scheme)) {
        if (s->n1_fixed < 0) throw std::invalid_argument("ExperimentConfig: n1 must be >= 0");
        for (auto n : n_list) {
            const std::int64_t n1 =
                s->n1_fixed > 0
                    ? s->n1_fixed
                    : static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(n))));
            if (n1 < 1 || n1 >= n)
                throw std::invalid_argument("ExperimentConfig: one-round needs 1 <= n1 < n");
        }
    }
    if (const auto* p = std::get_if<UniformThetaPrior>(&theta_source))
        if (!(p->hi > p->lo))
            throw std::invalid_argument("ExperimentConfig: empty theta prior interval");
}

RiskCurve run_risk_experiment(const ExperimentConfig& config) {
    config.validate();
    RiskCurve curve;
    curve.scheme = scheme_label(config.scheme);
    curve.family = config.family.name();
    curve.trials = config.trials;
    curve.seed = config.seed;

    const auto trials = static_cast<std::size_t>(config.trials);
    std::vector<double> sq_err(trials);
    std::vector<char> failed(trials);

    for (const std::int64_t n : config.n_list) {
        parallel_for(trials, [&](std::size_t trial) {
            const TrialOutcome out = run_trial(
                config, n,
                derive_seed(config.seed, static_cast<std::uint64_t>(n), trial));
            sq_err[trial] = out.failed ? 0.0 : out.sq_err;
            failed[trial] = out.failed ? 1 : 0;
        });
        std::int64_t n_failed = 0;
        for (char f : failed) n_failed += f;
        if (n_failed * 100 > config.trials)
            throw std::runtime_error("run_risk_experiment: >1% degenerate estimates at n=" +
                                     std::to_string(n));
        const auto valid = static_cast<double>(config.trials - n_failed);
        const double mean = pairwise_sum(sq_err) / valid;
        std::vector<double> sq_dev(trials, 0.0);
        for (std::size_t t = 0; t < trials; ++t)
            if (!failed[t]) sq_dev[t] = (sq_err[t] - mean) * (sq_err[t] - mean);
        const double sd =
            valid > 1.5 ? std::sqrt(pairwise_sum(sq_dev) / (valid - 1.0)) : 0.0;
        const double nd = static_cast<double>(n);
        curve.n_values.push_back(n);
        curve.n_mse.push_back(nd * mean);
        curve.std_err.push_back(nd * sd / std::sqrt(valid));
        curve.failures.push_back(n_failed);
    }
    return curve;
}

double uniform_two_stage_estimate(double halfwidth, std::int64_t n, double theta, Rng& rng) {
    if (!(halfwidth > 0.0))
        throw std::invalid_argument("uniform_two_stage_estimate: halfwidth must be positive");
    const double nd = static_cast<double>(n);
    const double log_n = std::log(nd);
    if (std::fabs(theta) > log_n)
        throw std::domain_error("uniform_two_stage_estimate: |theta| exceeds the log n guarantee range");
    if (!(halfwidth <= log_n))
        throw std::invalid_argument("uniform_two_stage_estimate: halfwidth must be <= log n");
    const auto m1 = static_cast<std::int64_t>(std::floor(std::sqrt(nd)));
    const auto m2 = static_cast<std::int64_t>(std::floor(4.0 * std::pow(nd, 0.25)));
    if (m1 < 2 || m2 < 2)
        throw std::invalid_argument("uniform_two_stage_estimate: n too small for two stages");

    // Scans blocks of n/m observations against an increasing threshold grid
    // and returns the largest threshold whose block saw no observation below
    // it; that threshold tracks the lower support edge theta - halfwidth.
    const auto edge_scan = [&](double grid_lo, double spacing, std::int64_t m) {
        double best = grid_lo;
        bool found = false;
        for (std::int64_t j = 0; j < m; ++j) {
            const double t = grid_lo + spacing * static_cast<double>(j);
            const std::int64_t begin = (n * j) / m;
            const std::int64_t end = (n * (j + 1)) / m;
            bool all_above = true;
            for (std::int64_t i = begin; i < end; ++i) {
                const double x = theta + halfwidth * (2.0 * rng.uniform01() - 1.0);
                if (x < t) all_above = false;
                // The block is consumed in full to keep the draw sequence
                // aligned across thresholds.
            }
            if (all_above) {
                best = std::max(best, t);
                found = true;
            }
        }
        return found ? best : grid_lo;
    };

    const double eps = 2.0 * log_n / nd;
    const double stage1_lo = -nd * eps;
    const double stage1_spacing = 2.0 * nd * eps / static_cast<double>(m1);
    const double edge1 = edge_scan(stage1_lo, stage1_spacing, m1);
    const double theta_init = edge1 + halfwidth;

    const double window = 16.0 * log_n / std::sqrt(nd);
    const double stage2_lo = (theta_init - halfwidth) - window;
    const double stage2_spacing = 2.0 * window / static_cast<double>(m2);
    const double edge2 = edge_scan(stage2_lo, stage2_spacing, m2);
    return edge2 + halfwidth;
}

FastRateResult uniform_fast_rate_experiment(double halfwidth, std::int64_t n,
                                            std::int64_t trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("uniform_fast_rate_experiment: trials >= 1");
    const double nd = static_cast<double>(n);
    const double log_n = std::log(nd);
    const double radius = 8.0 * log_n / std::pow(nd, 0.75);

    std::vector<double> abs_err(static_cast<std::size_t>(trials));
    parallel_for(static_cast<std::size_t>(trials), [&](std::size_t trial) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(n), trial));
        const double theta = rng.uniform(-log_n, log_n);
        const double est = uniform_two_stage_estimate(halfwidth, n, theta, rng);
        abs_err[trial] = std::fabs(est - theta);
    });

    FastRateResult result;
    result.n = n;
    result.trials = trials;
    std::int64_t failures = 0;
    for (double e : abs_err)
        if (e >= radius) ++failures;
    result.failure_fraction = static_cast<double>(failures) / static_cast<double>(trials);
    const auto mid = abs_err.begin() + trials / 2;
    std::nth_element(abs_err.begin(), mid, abs_err.end());
    result.median_abs_error = *mid;
    return result;
}

std::vector<std::pair<std::int64_t, double>> compute_are_curve(const RiskCurve& curve,
                                                               const LocationFamily& family) {
    if (curve.n_values.empty()) throw std::invalid_argument("compute_are_curve: empty curve");
    const double info = family.fisher_location();
    std::vector<std::pair<std::int64_t, double>> out;
    out.reserve(curve.n_values.size());
    for (std::size_t i = 0; i < curve.n_values.size(); ++i)
        out.emplace_back(curve.n_values[i], 1.0 / (info * curve.n_mse[i]));
    return out;
}

std::string to_csv(const RiskCurve& curve) {
    std::string out = "n,scheme,n_mse,std_err,trials,seed\n";
    char buf[160];
    for (std::size_t i = 0; i < curve.n_values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%lld,%s,%.17g,%.17g,%lld,%llu\n",
                      static_cast<long long>(curve.n_values[i]), curve.scheme.c_str(),
                      curve.n_mse[i], curve.std_err[i],
                      static_cast<long long>(curve.trials),
                      static_cast<unsigned long long>(curve.seed));
        out += buf;
    }
    return out;
}

std::string to_json(const RiskCurve& curve) {
    nlohmann::ordered_json j;
    j["scheme"] = curve.scheme;
    j["family"] = curve.family;
    j["trials"] = curve.trials;
    j["seed"] = curve.seed;
    j["n"] = curve.n_values;
    j["n_mse"] = curve.n_mse;
    j["std_err"] = curve.std_err;
    j["failures"] = curve.failures;
    return j.dump(2) + "\n";
}

std::string merged_csv(const std::vector<RiskCurve>& curves,
                       const std::vector<std::string>& labels) {
    if (curves.empty() || curves.size() != labels.size())
        throw std::invalid_argument("merged_csv: curves/labels mismatch");
    for (const auto& c : curves)
        if (c.n_values != curves.front().n_values)
            throw std::invalid_argument("merged_csv: curves must share one n grid");
    std::string out = "n";
    for (const auto& label : labels) out += "," + label;
    out += "\n";
    char buf[64];
    for (std::size_t i = 0; i < curves.front().n_values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%lld",
                      static_cast<long long>(curves.front().n_values[i]));
        out += buf;
        for (const auto& c : curves) {
            std::snprintf(buf, sizeof buf, ",%.17g", c.n_mse[i]);
            out += buf;
        }
        out += "\n";
    }
    return out;
}

void write_output(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    file << text;
    if (!file) throw std::runtime_error("failed writing output file: " + path);
}

} // namespace onebit
