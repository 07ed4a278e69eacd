#pragma once

#include <string>
#include <vector>

namespace onebit {

// Discrete probability measure over a strictly increasing threshold grid.
struct ThresholdDensity {
    std::vector<double> grid;
    std::vector<double> weights;

    // Validates and normalizes nothing: grid must be strictly increasing,
    // weights non-negative and summing to 1 within 1e-12.
    static ThresholdDensity make(std::vector<double> grid, std::vector<double> weights);

    static ThresholdDensity point_mass(double t);
    static ThresholdDensity uniform_grid(double lo, double hi, std::size_t points);

    std::size_t size() const { return grid.size(); }
};

// Two-column CSV with header "t,weight".
std::string to_csv(const ThresholdDensity& density);
ThresholdDensity threshold_density_from_csv(const std::string& text);

} // namespace onebit
