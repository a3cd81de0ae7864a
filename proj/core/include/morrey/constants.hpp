#pragma once

#include <cmath>
#include <limits>

namespace morrey {

inline constexpr double pi = 3.14159265358979323846;

// Surface measure of the unit sphere S^{n-1} in R^n:
//   omega_{n-1} = 2 pi^{n/2} / Gamma(n/2).
// n = 1 gives 2 (the two endpoints of an interval carry counting measure),
// n = 2 gives 2*pi, n = 3 gives 4*pi.
inline double sphere_surface(int n) {
    return 2.0 * std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n);
}

// Volume of the unit ball B(0,1) in R^n: C_n = pi^{n/2} / Gamma(n/2 + 1),
// so |B(a,r)| = C_n r^n.  Equivalently C_n = omega_{n-1} / n.
inline double unit_ball_volume(int n) {
    return std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

// Slack for convergence tests against end-law exponents.  Exponents fitted
// from samples carry rounding of order 1e-15, and an integral whose
// convergence margin is this thin evaluates to a number dominated by that
// noise; the whole closed neighbourhood of the critical exponent therefore
// counts as divergent.
inline constexpr double exponent_slack = 1e-9;

// Conjugate exponent x' = x/(x-1); dual(1) = +inf, dual(+inf) = 1.
inline double dual_exponent(double x) {
    if (std::isinf(x)) return 1.0;
    if (x == 1.0) return std::numeric_limits<double>::infinity();
    return x / (x - 1.0);
}

} // namespace morrey
