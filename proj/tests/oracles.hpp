#pragma once

// Test-only reference implementations, independent of the library's
// evaluation paths, plus frozen high-precision constants.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

// Standard normal density/CDF in long double through erfcl; the library
// goes through its own double-precision code path.
inline long double normal_pdf(long double x) {
    return std::exp(-0.5L * x * x) / std::sqrt(2.0L * std::numbers::pi_v<long double>);
}
inline long double normal_cdf(long double x) {
    return 0.5L * erfcl(-x / std::sqrt(2.0L));
}
inline long double normal_eta(long double x) {
    const long double f = normal_pdf(x);
    return f * f / (normal_cdf(x) * normal_cdf(-x));
}

// Recursive adaptive Simpson; deliberately a different quadrature scheme
// than the library's Gauss-Kronrod rule.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double tol, int depth = 0) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double left = (m - a) / 6.0 * (fa + 4.0 * f(lm) + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * f(rm) + fb);
    if (depth > 40 || std::fabs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, m, tol / 2, depth + 1) + simpson(f, m, b, tol / 2, depth + 1);
}

// Frozen reference values (30-digit arithmetic, truncated to double).
inline constexpr double kPhi2 = 0.977249868051820792;        // normal CDF at 2
inline constexpr double kPhiM1 = 0.158655253931457051;       // normal CDF at -1
inline constexpr double kPhiM2 = 0.022750131948179207;       // normal CDF at -2
inline constexpr double kQ99 = 2.326347874040841101;         // normal quantile at 0.99
inline constexpr double kEta1 = 0.438628861102213960;        // normal eta(1)
inline constexpr double kEta2 = 0.131115085865042300;        // normal eta(2)
inline constexpr double kEta04 = 0.600515607480120665;       // normal eta(0.4)
inline constexpr double kEtaDelta01 = 1.015898174947855517;  // normal eta_delta(0, delta=1)
inline constexpr double kKappaUnifT2 = 0.225764154128526703; // (1/4) int_0^4 eta, normal
inline constexpr double kCeoND1e4 = 1.333552323775008;       // n * D* at n=1e4, sigma=st=1
inline constexpr double kGennorm15F1 = 0.887591235991927726; // gennorm(1.5,1) CDF at 1
inline constexpr double kGennorm15FM2 = 0.014119612179245968; // gennorm(1.5,1) CDF at -2
inline constexpr double kGennorm15Pdf0 = 0.553866083716236235;
inline constexpr double kGennorm15Fisher = 1.483773194735092581;
inline constexpr double kGennorm15Var = 0.738488111621648313;
inline constexpr double kLaplaceCdfM1 = 0.183939720585721161; // exp(-1)/2

} // namespace oracle
