#pragma once

#include <span>

#include "morrey/estimate.hpp"
#include "morrey/quadrature.hpp"

namespace morrey {

// Parameters of the kernel K(x) = |x|^{alpha-n} (1+|x|)^{-gamma} on R^n.
// gamma = 0 reduces to the plain fractional-integral kernel |x|^{alpha-n}.
struct KernelParams {
    double alpha;
    double gamma = 0.0;
    int dim = 1;

    void validate() const; // 0 < alpha < dim, gamma >= 0, dim >= 1
};

// Kernel value at radius r > 0 (the kernel is radial).
double eval_kernel_radial(double r, const KernelParams& k);

// Kernel value at a point; throws SingularityError at x = 0.
double eval_kernel(std::span<const double> x, const KernelParams& k);

// Open interval (t_lo, t_hi) of Lebesgue exponents t with K in L^t:
//   t_lo = n/(n+gamma-alpha), t_hi = n/(n-alpha).  Requires gamma > 0;
// for gamma = 0 no exponent works and callers get a DivergenceError.
struct LebesgueWindow {
    double t_lo;
    double t_hi;
};
LebesgueWindow lebesgue_membership_window(const KernelParams& k);

// ||K||_{L^t} = (omega_{n-1} int_0^inf r^{(alpha-n)t + n - 1} (1+r)^{-gamma t} dr)^{1/t}
// by adaptive quadrature, splitting at r = 1 and removing both endpoint powers
// exactly.  Throws DivergenceError outside the membership window, naming the
// endpoint that diverges.
NormEstimate kernel_lebesgue_norm(const KernelParams& k, double t,
                                  const QuadratureOptions& opt = {});

// Closed form for the gamma = 0 Morrey norm at the critical second index
// t = n/(n-alpha): on a centered ball B(0,R),
//   |B|^{s/t-1} int_B |x|^{(alpha-n)s} dx
//     = C_n^{s/t-1} omega_{n-1} R^{n(s/t-1) + (alpha-n)s + n} / ((alpha-n)s + n)
// and the R-exponent vanishes identically, so the supremum equals
//   ( C_n^{s/t-1} omega_{n-1} / ((alpha-n)s + n) )^{1/s}.
// Requires 1 <= s < n/(n-alpha); otherwise the ball integral diverges.
double riesz_morrey_closed_form(double alpha, double s, int n);

// The centered-ball quantity above at a specific radius R (used to check that
// it really is independent of R).
double riesz_centered_ball_value(double alpha, double s, int n, double R);

} // namespace morrey
