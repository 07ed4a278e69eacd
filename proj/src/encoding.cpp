#include "onebit/encoding.hpp"

#include <cmath>
#include <stdexcept>

namespace onebit {

void SgdConfig::validate() const {
    if (!(gamma0 > 0.0)) throw std::invalid_argument("SgdConfig: gamma0 must be positive");
    if (!(exponent > 2.0 / 3.0) || !(exponent < 1.0))
        throw std::invalid_argument("SgdConfig: exponent must lie in (2/3, 1)");
    if (!std::isfinite(theta_init)) throw std::invalid_argument("SgdConfig: theta_init must be finite");
}

double SgdConfig::gamma(std::int64_t n) const {
    return gamma0 * std::pow(static_cast<double>(n), -exponent);
}

double clamp_bit_fraction(double fraction, std::int64_t bit_count) {
    if (bit_count < 1) throw std::invalid_argument("clamp_bit_fraction: empty bit sequence");
    const double k = static_cast<double>(bit_count);
    const double lo = 1.0 / (k + 1.0);
    const double hi = k / (k + 1.0);
    if (fraction < lo) return lo;
    if (fraction > hi) return hi;
    return fraction;
}

SgdTrajectory run_adaptive_sgd(std::span<const double> samples, const SgdConfig& cfg) {
    cfg.validate();
    if (samples.empty()) throw std::invalid_argument("run_adaptive_sgd: empty sample");
    SgdTrajectory traj;
    traj.iterates.reserve(samples.size() + 1);
    traj.bits.reserve(samples.size());
    double theta = cfg.theta_init;
    traj.iterates.push_back(theta);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const int bit = samples[i] > theta ? 1 : -1;
        theta += cfg.gamma(static_cast<std::int64_t>(i) + 1) * bit;
        traj.bits.push_back(bit);
        traj.iterates.push_back(theta);
    }
    return traj;
}

OneRoundRecord run_one_round(std::span<const double> samples, double theta0,
                             std::int64_t n1, const LocationFamily& family) {
    const auto n = static_cast<std::int64_t>(samples.size());
    if (n1 < 1 || n1 >= n)
        throw std::invalid_argument("run_one_round: need 1 <= n1 < sample size");
    OneRoundRecord rec;
    rec.n1 = n1;
    rec.first_stage_bits.reserve(n1);
    std::int64_t ones = 0;
    for (std::int64_t i = 0; i < n1; ++i) {
        const int b = encode_fixed_threshold(samples[i], theta0);
        rec.first_stage_bits.push_back(b);
        ones += b;
    }
    const double p1 = clamp_bit_fraction(static_cast<double>(ones) / static_cast<double>(n1), n1);
    rec.t_n = theta0 - family.quantile(p1);
    rec.second_stage_bits.reserve(n - n1);
    for (std::int64_t i = n1; i < n; ++i)
        rec.second_stage_bits.push_back(encode_fixed_threshold(samples[i], rec.t_n));
    return rec;
}

std::vector<double> sample_thresholds(const ThresholdDensity& density,
                                      std::int64_t n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_thresholds: n must be >= 1");
    std::vector<double> cumulative(density.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < density.size(); ++j) {
        acc += density.weights[j];
        cumulative[j] = acc;
    }
    cumulative.back() = 1.0;
    Rng rng(seed);
    std::vector<double> out(static_cast<std::size_t>(n));
    for (auto& t : out)
        t = density.grid[rng.discrete(cumulative.data(), cumulative.size())];
    return out;
}

} // namespace onebit
