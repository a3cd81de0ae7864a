#pragma once

#include <functional>

namespace morrey {

struct QuadratureOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-14;
    int max_depth = 48;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0; // accumulated local error estimate (absolute)
};

using Integrand = std::function<double(double)>;

// Adaptive Gauss-Kronrod (G7,K15) on a finite interval. The integrand must be
// finite at every interior node; endpoint values are never requested.
QuadResult integrate_ex(const Integrand& f, double a, double b,
                        const QuadratureOptions& opt = {});
double integrate(const Integrand& f, double a, double b,
                 const QuadratureOptions& opt = {});

// Integrals with a known power singularity at one endpoint:
//   integrate_edge_left : int_a^b (x-a)^e g(x) dx,  e > -1
//   integrate_edge_right: int_a^b (b-x)^e g(x) dx,  e > -1
// The edge power is removed exactly by the substitution x = a + (b-a) u^m with
// m(e+1) >= 2, so only the smooth factor g is sampled adaptively.
double integrate_edge_left(const Integrand& g, double a, double b, double e,
                           const QuadratureOptions& opt = {});
double integrate_edge_right(const Integrand& g, double a, double b, double e,
                            const QuadratureOptions& opt = {});

// int_a^infty f(x) dx for f ~ c x^{e_inf} with e_inf < -1 (a > 0); maps the
// tail onto (0, 1/a] via u = 1/x, peeling off the limiting power exactly.
double integrate_tail(const Integrand& f, double a, double e_inf,
                      const QuadratureOptions& opt = {});

// Fixed 7-point Gauss rule, for smooth integrands over short cells.
double gauss7(const Integrand& f, double a, double b);

} // namespace morrey
