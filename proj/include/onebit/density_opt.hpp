#pragma once

#include <stdexcept>
#include <vector>

#include "onebit/location_family.hpp"
#include "onebit/threshold_density.hpp"

namespace onebit {

// Discretized threshold-design problem over a location interval [-T, T].
// prior_weights is empty for the minimax problem and a probability vector
// over theta_grid for the Bayes problem.
struct DesignProblem {
    LocationFamily family;
    std::vector<double> theta_grid;
    std::vector<double> t_grid;
    std::vector<double> prior_weights;

    static DesignProblem minimax(const LocationFamily& family, double T,
                                 std::size_t points = 201);
    static DesignProblem bayes_uniform_prior(const LocationFamily& family, double T,
                                             std::size_t points = 201);
    static DesignProblem bayes_gaussian_prior(const LocationFamily& family, double T,
                                              double sigma_theta, std::size_t points = 201);

    void validate(bool needs_prior) const;
};

struct DesignSolution {
    ThresholdDensity density;
    double objective = 0.0;   // attained min kappa (minimax) or Bayes risk
    double certificate = 0.0; // duality gap (minimax) / stationarity gap (Bayes)
    long iterations = 0;
};

class SolverFailure : public std::runtime_error {
public:
    SolverFailure(const std::string& what, DesignSolution best)
        : std::runtime_error(what), best_(std::move(best)) {}
    const DesignSolution& best() const { return best_; }

private:
    DesignSolution best_;
};

// Maximizes min_{theta in theta_grid} sum_j lambda_j eta(t_j - theta) over
// densities lambda on t_grid. Solved as a finite zero-sum game by
// extragradient multiplicative-weights self-play with active-set
// refinement; the certificate is the full-matrix duality gap between the
// returned density and an explicit adversarial theta mixture.
// max_iterations = 0 selects the built-in budget; exceeding the budget
// throws SolverFailure carrying the best iterate and its certificate.
DesignSolution solve_minimax_density(const DesignProblem& problem, double tol,
                                     long max_iterations = 0);

// Minimizes sum_i pi_i / kappa_lambda(theta_i) over the simplex by entropic
// mirror descent with Armijo backtracking; the certificate is the simplex
// stationarity gap <grad, lambda> - min_j grad_j, which also bounds the
// objective suboptimality.
DesignSolution solve_bayes_density(const DesignProblem& problem, double tol,
                                   long max_iterations = 0);

// Objective evaluators for the two problems on explicit weight vectors.
double minimax_objective(const DesignProblem& problem, const std::vector<double>& weights);
double bayes_objective(const DesignProblem& problem, const std::vector<double>& weights);

// kappa(theta) companion curve of a density over the problem's theta grid,
// serialized as CSV "theta,kappa".
std::string kappa_curve_csv(const DesignProblem& problem, const ThresholdDensity& density);

} // namespace onebit
