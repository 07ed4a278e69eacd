#include "onebit/threshold_density.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace onebit {

ThresholdDensity ThresholdDensity::make(std::vector<double> grid,
                                        std::vector<double> weights) {
    if (grid.empty() || grid.size() != weights.size())
        throw std::invalid_argument("ThresholdDensity: grid/weights size mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]))
            throw std::invalid_argument("ThresholdDensity: non-finite grid point");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw std::invalid_argument("ThresholdDensity: grid must be strictly increasing");
        if (!(weights[i] >= 0.0))
            throw std::invalid_argument("ThresholdDensity: negative weight");
        total += weights[i];
    }
    if (std::fabs(total - 1.0) > 1e-12)
        throw std::invalid_argument("ThresholdDensity: weights must sum to 1");
    return {std::move(grid), std::move(weights)};
}

ThresholdDensity ThresholdDensity::point_mass(double t) {
    return make({t}, {1.0});
}

ThresholdDensity ThresholdDensity::uniform_grid(double lo, double hi,
                                                std::size_t points) {
    if (points < 2 || !(hi > lo))
        throw std::invalid_argument("ThresholdDensity::uniform_grid: bad arguments");
    std::vector<double> grid(points), weights(points, 1.0 / static_cast<double>(points));
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    // Exact unit mass regardless of rounding in the division above.
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < points; ++i) total += weights[i];
    weights[points - 1] = 1.0 - total;
    return make(std::move(grid), std::move(weights));
}

std::string to_csv(const ThresholdDensity& density) {
    std::string out = "t,weight\n";
    char buf[80];
    for (std::size_t i = 0; i < density.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", density.grid[i], density.weights[i]);
        out += buf;
    }
    return out;
}

ThresholdDensity threshold_density_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<double> grid, weights;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("t,", 0) == 0) continue; // header
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("threshold density CSV: missing column");
        grid.push_back(std::stod(line.substr(0, comma)));
        weights.push_back(std::stod(line.substr(comma + 1)));
    }
    return ThresholdDensity::make(std::move(grid), std::move(weights));
}

} // namespace onebit
