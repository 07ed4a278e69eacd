#include "onebit/density_opt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "onebit/bounds.hpp"
#include "onebit/parallel.hpp"

namespace onebit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> linspace(double lo, double hi, std::size_t points) {
    std::vector<double> out(points);
    for (std::size_t i = 0; i < points; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    return out;
}

struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> a;
    double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
    const double* row(std::size_t i) const { return a.data() + i * cols; }
};

// Single-threshold information with the deterministic-bit convention: a
// threshold outside the open support yields a constant bit, information 0.
double payoff_eta(const LocationFamily& family, double offset) {
    return family.in_open_support(offset) ? family.eta(offset) : 0.0;
}

// payoff[i][j] = eta(t_j - theta_i); rows play theta (minimize), columns
// play t (maximize).
Matrix build_payoff(const DesignProblem& p) {
    Matrix m;
    m.rows = p.theta_grid.size();
    m.cols = p.t_grid.size();
    m.a.resize(m.rows * m.cols);
    parallel_for(m.rows, [&](std::size_t i) {
        for (std::size_t j = 0; j < m.cols; ++j)
            m.at(i, j) = payoff_eta(p.family, p.t_grid[j] - p.theta_grid[i]);
    });
    return m;
}

void softmax_inplace(std::vector<double>& logits, std::vector<double>& out) {
    const double top = *std::max_element(logits.begin(), logits.end());
    double z = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - top);
        z += out[i];
    }
    for (auto& v : out) v /= z;
}

struct GamePoint {
    std::vector<double> row_strategy;
    std::vector<double> col_strategy;
    double v_lo = -kInf; // min over pure rows against col_strategy
    double v_hi = kInf;  // max over pure cols against row_strategy
    long iterations = 0;
    std::vector<double> last_row; // final half-step iterates; these
    std::vector<double> last_col; // concentrate on the active supports
    double gap() const { return v_hi - v_lo; }
};

void evaluate_gap(const Matrix& M, GamePoint& pt) {
    pt.v_lo = kInf;
    for (std::size_t i = 0; i < M.rows; ++i) {
        double s = 0.0;
        const double* row = M.row(i);
        for (std::size_t j = 0; j < M.cols; ++j) s += row[j] * pt.col_strategy[j];
        pt.v_lo = std::min(pt.v_lo, s);
    }
    std::vector<double> col_payoff(M.cols, 0.0);
    for (std::size_t i = 0; i < M.rows; ++i) {
        const double u = pt.row_strategy[i];
        if (u == 0.0) continue;
        const double* row = M.row(i);
        for (std::size_t j = 0; j < M.cols; ++j) col_payoff[j] += u * row[j];
    }
    pt.v_hi = *std::max_element(col_payoff.begin(), col_payoff.end());
}

// Extragradient multiplicative-weights self-play (entropic mirror-prox).
// Averaged half-step strategies close the duality gap at rate
// O(L log(mn) / T); used here to localize the active supports.
GamePoint solve_game(const Matrix& M, double tol, long max_iters) {
    const std::size_t mr = M.rows, mc = M.cols;
    double L = 0.0;
    for (double v : M.a) L = std::max(L, std::fabs(v));
    if (L == 0.0) L = 1.0;
    const double step = 0.5 / L;

    std::vector<double> log_u(mr, 0.0), log_v(mc, 0.0);
    std::vector<double> u(mr), v(mc), wu(mr), wv(mc);
    std::vector<double> log_wu(mr), log_wv(mc);
    std::vector<double> grad_u(mr), grad_v(mc);
    std::vector<double> avg_u(mr, 0.0), avg_v(mc, 0.0);

    auto mat_vec = [&](const std::vector<double>& col, std::vector<double>& out) {
        for (std::size_t i = 0; i < mr; ++i) {
            double s = 0.0;
            const double* row = M.row(i);
            for (std::size_t j = 0; j < mc; ++j) s += row[j] * col[j];
            out[i] = s;
        }
    };
    auto vec_mat = [&](const std::vector<double>& rowv, std::vector<double>& out) {
        std::fill(out.begin(), out.end(), 0.0);
        for (std::size_t i = 0; i < mr; ++i) {
            const double ui = rowv[i];
            if (ui == 0.0) continue;
            const double* row = M.row(i);
            for (std::size_t j = 0; j < mc; ++j) out[j] += ui * row[j];
        }
    };

    GamePoint best;
    long averaged = 0;
    const long check_every = 64;
    for (long t = 1; t <= max_iters; ++t) {
        softmax_inplace(log_u, u);
        softmax_inplace(log_v, v);
        mat_vec(v, grad_u);
        vec_mat(u, grad_v);
        for (std::size_t i = 0; i < mr; ++i) log_wu[i] = log_u[i] - step * grad_u[i];
        for (std::size_t j = 0; j < mc; ++j) log_wv[j] = log_v[j] + step * grad_v[j];
        softmax_inplace(log_wu, wu);
        softmax_inplace(log_wv, wv);
        mat_vec(wv, grad_u);
        vec_mat(wu, grad_v);
        for (std::size_t i = 0; i < mr; ++i) log_u[i] -= step * grad_u[i];
        for (std::size_t j = 0; j < mc; ++j) log_v[j] += step * grad_v[j];
        for (std::size_t i = 0; i < mr; ++i) avg_u[i] += wu[i];
        for (std::size_t j = 0; j < mc; ++j) avg_v[j] += wv[j];
        ++averaged;

        if (t % check_every == 0 || t == max_iters) {
            GamePoint pt;
            pt.row_strategy.assign(mr, 0.0);
            pt.col_strategy.assign(mc, 0.0);
            const double inv = 1.0 / static_cast<double>(averaged);
            for (std::size_t i = 0; i < mr; ++i) pt.row_strategy[i] = avg_u[i] * inv;
            for (std::size_t j = 0; j < mc; ++j) pt.col_strategy[j] = avg_v[j] * inv;
            evaluate_gap(M, pt);
            pt.iterations = t;
            if (pt.gap() < best.gap() || best.iterations == 0) {
                best = pt;
                best.last_row = wu;
                best.last_col = wv;
            }
            if (best.gap() <= tol) return best;
        }
    }
    return best;
}

// Dense tableau simplex for max 1'y subject to A y <= 1, y >= 0 (the
// normalized row-player program of a positive game). Returns the primal
// vertex y, the duals x of the covering constraints, and the pivot count.
// Dantzig pricing with a late switch to Bland's rule against cycling.
bool simplex_game(const Matrix& A, std::vector<double>& y, std::vector<double>& x,
                  long& pivots) {
    const std::size_t m = A.rows, n = A.cols;
    const std::size_t width = n + m + 1;
    std::vector<double> T(m * width, 0.0);
    std::vector<double> z(width, 0.0);
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) T[i * width + j] = A.at(i, j);
        T[i * width + n + i] = 1.0;
        T[i * width + n + m] = 1.0;
        basis[i] = n + i;
    }
    for (std::size_t j = 0; j < n; ++j) z[j] = -1.0;

    const long pivot_cap = 20000;
    for (pivots = 0; pivots < pivot_cap; ++pivots) {
        std::size_t enter = width;
        if (pivots < 4000) {
            double most = -1e-10;
            for (std::size_t j = 0; j + 1 < width; ++j)
                if (z[j] < most) {
                    most = z[j];
                    enter = j;
                }
        } else {
            for (std::size_t j = 0; j + 1 < width; ++j)
                if (z[j] < -1e-10) {
                    enter = j;
                    break;
                }
        }
        if (enter == width) break; // optimal

        std::size_t leave = m;
        double best_ratio = kInf;
        for (std::size_t i = 0; i < m; ++i) {
            const double coef = T[i * width + enter];
            if (coef > 1e-11) {
                const double ratio = T[i * width + n + m] / coef;
                if (ratio < best_ratio - 1e-12 ||
                    (ratio < best_ratio + 1e-12 && (leave == m || basis[i] < basis[leave]))) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
        }
        if (leave == m) return false; // unbounded: not a positive game

        double* prow = T.data() + leave * width;
        const double inv = 1.0 / prow[enter];
        for (std::size_t k = 0; k < width; ++k) prow[k] *= inv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave) continue;
            double* row = T.data() + i * width;
            const double factor = row[enter];
            if (factor == 0.0) continue;
            for (std::size_t k = 0; k < width; ++k) row[k] -= factor * prow[k];
        }
        const double zfactor = z[enter];
        if (zfactor != 0.0)
            for (std::size_t k = 0; k < width; ++k) z[k] -= zfactor * prow[k];
        basis[leave] = enter;
    }

    y.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n) y[basis[i]] = std::max(0.0, T[i * width + n + m]);
    x.assign(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) x[j] = std::max(0.0, z[n + j]);
    const double sum_y = std::accumulate(y.begin(), y.end(), 0.0);
    const double sum_x = std::accumulate(x.begin(), x.end(), 0.0);
    if (!(sum_y > 0.0) || !(sum_x > 0.0)) return false;
    return std::fabs(sum_y - sum_x) <= 1e-7 * (sum_y + 1.0);
}

// Exact solve of the game restricted to (rows, cols), lifted to the full
// grid and certified there. The payoff shift makes every entry positive so
// the normalized-program value stays strictly positive.
bool solve_restricted(const Matrix& M, const std::vector<std::size_t>& rows,
                      const std::vector<std::size_t>& cols, double shift, GamePoint& out,
                      long& pivots) {
    if (rows.empty() || cols.empty()) return false;
    Matrix A; // constraint matrix of the row-player program: cols x rows
    A.rows = cols.size();
    A.cols = rows.size();
    A.a.resize(A.rows * A.cols);
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t r = 0; r < rows.size(); ++r)
            A.at(c, r) = M.at(rows[r], cols[c]) + shift;
    std::vector<double> y, x;
    if (!simplex_game(A, y, x, pivots)) return false;
    const double sum_y = std::accumulate(y.begin(), y.end(), 0.0);
    const double sum_x = std::accumulate(x.begin(), x.end(), 0.0);
    out.row_strategy.assign(M.rows, 0.0);
    out.col_strategy.assign(M.cols, 0.0);
    for (std::size_t r = 0; r < rows.size(); ++r) out.row_strategy[rows[r]] = y[r] / sum_y;
    for (std::size_t c = 0; c < cols.size(); ++c) out.col_strategy[cols[c]] = x[c] / sum_x;
    evaluate_gap(M, out);
    return true;
}

// Indices of the heaviest strategy atoms, thresholded relative to the
// maximum and capped in count.
std::vector<std::size_t> top_support(const std::vector<double>& w, std::size_t cap,
                                     double rel_cut) {
    const double top = *std::max_element(w.begin(), w.end());
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < w.size(); ++k)
        if (w[k] >= rel_cut * top) idx.push_back(k);
    if (idx.size() > cap) {
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });
        idx.resize(cap);
        std::sort(idx.begin(), idx.end());
    }
    return idx;
}

ThresholdDensity density_from_weights(const DesignProblem& p, std::vector<double> w) {
    double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& x : w) x /= total;
    total = 0.0;
    for (std::size_t j = 0; j + 1 < w.size(); ++j) total += w[j];
    w.back() = 1.0 - total;
    if (w.back() < 0.0) w.back() = 0.0;
    return ThresholdDensity::make(p.t_grid, std::move(w));
}

} // namespace

DesignProblem DesignProblem::minimax(const LocationFamily& family, double T,
                                     std::size_t points) {
    DesignProblem p{family, linspace(-T, T, points), linspace(-T, T, points), {}};
    p.validate(false);
    return p;
}

DesignProblem DesignProblem::bayes_uniform_prior(const LocationFamily& family, double T,
                                                 std::size_t points) {
    DesignProblem p{family, linspace(-T, T, points), linspace(-T, T, points),
                    std::vector<double>(points, 1.0 / static_cast<double>(points))};
    p.validate(true);
    return p;
}

DesignProblem DesignProblem::bayes_gaussian_prior(const LocationFamily& family, double T,
                                                  double sigma_theta, std::size_t points) {
    DesignProblem p{family, linspace(-T, T, points), linspace(-T, T, points), {}};
    p.prior_weights.resize(points);
    double total = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
        const double z = p.theta_grid[i] / sigma_theta;
        p.prior_weights[i] = std::exp(-0.5 * z * z);
        total += p.prior_weights[i];
    }
    for (auto& w : p.prior_weights) w /= total;
    p.validate(true);
    return p;
}

void DesignProblem::validate(bool needs_prior) const {
    if (theta_grid.empty() || t_grid.empty())
        throw std::invalid_argument("DesignProblem: empty grids");
    if (!std::is_sorted(theta_grid.begin(), theta_grid.end()) ||
        !std::is_sorted(t_grid.begin(), t_grid.end()))
        throw std::invalid_argument("DesignProblem: grids must be sorted");
    if (needs_prior) {
        if (prior_weights.size() != theta_grid.size())
            throw std::invalid_argument("DesignProblem: prior/theta grid size mismatch");
        double total = 0.0;
        for (double w : prior_weights) {
            if (!(w >= 0.0)) throw std::invalid_argument("DesignProblem: negative prior weight");
            total += w;
        }
        if (std::fabs(total - 1.0) > 1e-9)
            throw std::invalid_argument("DesignProblem: prior must sum to 1");
    }
}

DesignSolution solve_minimax_density(const DesignProblem& problem, double tol,
                                     long max_iterations) {
    problem.validate(false);
    if (!(tol > 0.0)) throw std::invalid_argument("solve_minimax_density: tol must be positive");
    if (max_iterations <= 0) max_iterations = 2'000'000;
    const Matrix M = build_payoff(problem);
    const std::size_t mr = M.rows, mc = M.cols;
    double L = 0.0;
    for (double v : M.a) L = std::max(L, std::fabs(v));
    const double shift = 0.01 * L + 1e-9;

    // Localize the active supports by self-play, then refine by column
    // generation: exact restricted solves against full-grid certificates.
    const GamePoint coarse =
        solve_game(M, std::max(tol, 1e-3), std::min<long>(3000, max_iterations));
    long total_iters = coarse.iterations;

    DesignSolution best;
    best.certificate = kInf;
    const auto consider = [&](const GamePoint& pt) {
        if (pt.row_strategy.empty()) return;
        if (pt.gap() < best.certificate) {
            best.density = density_from_weights(problem, pt.col_strategy);
            best.objective = pt.v_lo;
            best.certificate = pt.gap();
            best.iterations = total_iters;
        }
    };
    consider(coarse);

    std::vector<char> in_rows(mr, 0), in_cols(mc, 0);
    for (std::size_t i : top_support(coarse.last_row, 24, 1e-6)) in_rows[i] = 1;
    for (std::size_t j : top_support(coarse.last_col, 24, 1e-6)) in_cols[j] = 1;

    for (std::size_t round = 0; round < mr + mc + 8; ++round) {
        std::vector<std::size_t> rows, cols;
        for (std::size_t i = 0; i < mr; ++i)
            if (in_rows[i]) rows.push_back(i);
        for (std::size_t j = 0; j < mc; ++j)
            if (in_cols[j]) cols.push_back(j);

        GamePoint vertex;
        long pivots = 0;
        const bool solved = solve_restricted(M, rows, cols, shift, vertex, pivots);
        total_iters += pivots;
        if (!solved)
            throw SolverFailure("solve_minimax_density: restricted solve failed", best);
        consider(vertex);
        if (best.certificate <= tol) return best;
        if (total_iters >= max_iterations)
            throw SolverFailure("solve_minimax_density: iteration budget exhausted", best);

        // Most violated pure strategies against the current vertex.
        std::size_t arg_lo = 0, arg_hi = 0;
        {
            double v_lo = kInf;
            for (std::size_t i = 0; i < mr; ++i) {
                double s = 0.0;
                const double* row = M.row(i);
                for (std::size_t j = 0; j < mc; ++j) s += row[j] * vertex.col_strategy[j];
                if (s < v_lo) {
                    v_lo = s;
                    arg_lo = i;
                }
            }
            std::vector<double> col_payoff(mc, 0.0);
            for (std::size_t i = 0; i < mr; ++i) {
                const double ui = vertex.row_strategy[i];
                if (ui == 0.0) continue;
                const double* row = M.row(i);
                for (std::size_t j = 0; j < mc; ++j) col_payoff[j] += ui * row[j];
            }
            double v_hi = -kInf;
            for (std::size_t j = 0; j < mc; ++j)
                if (col_payoff[j] > v_hi) {
                    v_hi = col_payoff[j];
                    arg_hi = j;
                }
        }
        if (in_rows[arg_lo] && in_cols[arg_hi]) {
            // No pure strategy outside the working sets improves either
            // side; the certificate is at its numerical floor.
            break;
        }
        in_rows[arg_lo] = 1;
        in_cols[arg_hi] = 1;
    }
    if (best.certificate <= tol) return best;
    throw SolverFailure("solve_minimax_density: certificate did not reach tolerance", best);
}

DesignSolution solve_bayes_density(const DesignProblem& problem, double tol,
                                   long max_iterations) {
    problem.validate(true);
    if (!(tol > 0.0)) throw std::invalid_argument("solve_bayes_density: tol must be positive");
    const Matrix E = build_payoff(problem);
    const std::size_t mr = E.rows, mc = E.cols;

    for (std::size_t i = 0; i < mr; ++i) {
        if (problem.prior_weights[i] <= 0.0) continue;
        double row_sum = 0.0;
        for (std::size_t j = 0; j < mc; ++j) row_sum += E.at(i, j);
        if (!(row_sum > 0.0))
            throw std::invalid_argument("solve_bayes_density: a prior atom has zero information");
    }

    std::vector<double> log_w(mc, 0.0), w(mc), kappa_vals(mr), grad(mc), trial_w(mc);
    const auto objective = [&](const std::vector<double>& lam, std::vector<double>& kv) {
        double G = 0.0;
        for (std::size_t i = 0; i < mr; ++i) {
            if (problem.prior_weights[i] == 0.0) {
                kv[i] = 0.0;
                continue;
            }
            double s = 0.0;
            const double* row = E.row(i);
            for (std::size_t j = 0; j < mc; ++j) s += row[j] * lam[j];
            kv[i] = s;
            G += problem.prior_weights[i] / s;
        }
        return G;
    };

    softmax_inplace(log_w, w);
    double G = objective(w, kappa_vals);
    double step = 1.0;
    DesignSolution best;
    best.certificate = kInf;

    const long max_iters = max_iterations > 0 ? max_iterations : 300'000;
    for (long iter = 1; iter <= max_iters; ++iter) {
        for (std::size_t j = 0; j < mc; ++j) grad[j] = 0.0;
        for (std::size_t i = 0; i < mr; ++i) {
            const double pi = problem.prior_weights[i];
            if (pi == 0.0) continue;
            const double c = -pi / (kappa_vals[i] * kappa_vals[i]);
            const double* row = E.row(i);
            for (std::size_t j = 0; j < mc; ++j) grad[j] += c * row[j];
        }
        double lam_dot_grad = 0.0, min_grad = kInf;
        for (std::size_t j = 0; j < mc; ++j) {
            lam_dot_grad += w[j] * grad[j];
            min_grad = std::min(min_grad, grad[j]);
        }
        const double cert = lam_dot_grad - min_grad;
        if (cert < best.certificate) {
            best.density = density_from_weights(problem, w);
            best.objective = G;
            best.certificate = cert;
            best.iterations = iter;
        }
        if (cert <= tol) return best;

        // Entropic step with Armijo backtracking; the step grows again after
        // every acceptance so vertex solutions are reached quickly.
        bool accepted = false;
        std::vector<double> trial_log(mc);
        for (int bt = 0; bt < 60; ++bt) {
            for (std::size_t j = 0; j < mc; ++j) trial_log[j] = log_w[j] - step * grad[j];
            softmax_inplace(trial_log, trial_w);
            std::vector<double> trial_kappa(mr);
            const double G_trial = objective(trial_w, trial_kappa);
            double decrease = 0.0;
            for (std::size_t j = 0; j < mc; ++j) decrease += grad[j] * (trial_w[j] - w[j]);
            if (G_trial <= G + 0.25 * decrease) {
                log_w.swap(trial_log);
                w.swap(trial_w);
                kappa_vals.swap(trial_kappa);
                G = G_trial;
                step *= 2.0;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break; // step underflow: gradient-level noise floor
    }
    if (best.certificate <= tol) return best;
    throw SolverFailure("solve_bayes_density: stationarity gap did not reach tolerance", best);
}

double minimax_objective(const DesignProblem& problem, const std::vector<double>& weights) {
    if (weights.size() != problem.t_grid.size())
        throw std::invalid_argument("minimax_objective: weight size mismatch");
    double worst = kInf;
    for (double theta : problem.theta_grid) {
        double s = 0.0;
        for (std::size_t j = 0; j < weights.size(); ++j)
            if (weights[j] != 0.0)
                s += weights[j] * payoff_eta(problem.family, problem.t_grid[j] - theta);
        worst = std::min(worst, s);
    }
    return worst;
}

double bayes_objective(const DesignProblem& problem, const std::vector<double>& weights) {
    if (weights.size() != problem.t_grid.size())
        throw std::invalid_argument("bayes_objective: weight size mismatch");
    double G = 0.0;
    for (std::size_t i = 0; i < problem.theta_grid.size(); ++i) {
        const double pi = problem.prior_weights[i];
        if (pi == 0.0) continue;
        double s = 0.0;
        for (std::size_t j = 0; j < weights.size(); ++j)
            if (weights[j] != 0.0)
                s += weights[j] *
                     payoff_eta(problem.family, problem.t_grid[j] - problem.theta_grid[i]);
        G += pi / s;
    }
    return G;
}

std::string kappa_curve_csv(const DesignProblem& problem, const ThresholdDensity& density) {
    std::string out = "theta,kappa\n";
    char buf[80];
    for (double theta : problem.theta_grid) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", theta,
                      kappa(problem.family, density, theta));
        out += buf;
    }
    return out;
}

} // namespace onebit
