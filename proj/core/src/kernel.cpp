#include "morrey/kernel.hpp"

#include <cmath>
#include <sstream>

#include "morrey/constants.hpp"
#include "morrey/errors.hpp"

namespace morrey {

void KernelParams::validate() const {
    if (dim < 1) throw ConfigError("kernel dim must be >= 1");
    if (!(alpha > 0.0) || !(alpha < dim)) {
        std::ostringstream os;
        os << "kernel requires 0 < alpha < n; got alpha=" << alpha << ", n=" << dim;
        throw ConfigError(os.str());
    }
    if (gamma < 0.0) throw ConfigError("kernel gamma must be >= 0");
}

double eval_kernel_radial(double r, const KernelParams& k) {
    if (!(r > 0.0))
        throw SingularityError("kernel is singular at the origin (|x| = 0)");
    double v = std::pow(r, k.alpha - k.dim);
    if (k.gamma != 0.0) v *= std::pow(1.0 + r, -k.gamma);
    return v;
}

double eval_kernel(std::span<const double> x, const KernelParams& k) {
    k.validate();
    if (static_cast<int>(x.size()) != k.dim)
        throw ConfigError("point dimension does not match kernel dim");
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    return eval_kernel_radial(std::sqrt(r2), k);
}

LebesgueWindow lebesgue_membership_window(const KernelParams& k) {
    k.validate();
    if (k.gamma == 0.0)
        throw DivergenceError(
            "gamma = 0: |x|^{alpha-n} lies in no L^t (head needs t < n/(n-alpha), "
            "tail needs t > n/(n-alpha))");
    const double n = k.dim;
    return {n / (n + k.gamma - k.alpha), n / (n - k.alpha)};
}

NormEstimate kernel_lebesgue_norm(const KernelParams& k, double t,
                                  const QuadratureOptions& opt) {
    LebesgueWindow w = lebesgue_membership_window(k);
    if (!(t > 0.0)) throw ConfigError("t must be positive");
    const double n = k.dim;
    const double beta = (k.alpha - n) * t + n; // head exponent: need beta > 0
    const double g = k.gamma * t;              // decay of (1+r)^{-g}
    if (!(beta > 0.0)) {
        std::ostringstream os;
        os << "||K||_{L^" << t << "} diverges at the origin: need t < n/(n-alpha) = "
           << w.t_hi;
        throw DivergenceError(os.str());
    }
    if (!(g - beta > 0.0)) {
        std::ostringstream os;
        os << "||K||_{L^" << t << "} diverges at infinity: need t > n/(n+gamma-alpha) = "
           << w.t_lo;
        throw DivergenceError(os.str());
    }

    // Split at r = 1.  The far half maps onto the near form under r -> 1/r:
    //   int_1^inf r^{beta-1}(1+r)^{-g} dr = int_0^1 v^{(g-beta)-1}(1+v)^{-g} dv,
    // so one helper covers both pieces with endpoint power b-1 removed exactly.
    auto head = [&](double b) {
        auto smooth = [&](double r) { return std::pow(1.0 + r, -g); };
        return integrate_edge_left(smooth, 0.0, 1.0, b - 1.0, opt);
    };
    const double integral = head(beta) + head(g - beta);

    NormEstimate est;
    est.method = NormEstimate::Method::Quadrature;
    est.value = std::pow(sphere_surface(k.dim) * integral, 1.0 / t);
    est.error_indicator = opt.rel_tol;
    return est;
}

double riesz_morrey_closed_form(double alpha, double s, int n) {
    KernelParams{alpha, 0.0, n}.validate();
    if (!(s >= 1.0)) throw ConfigError("s must be >= 1");
    const double denom = (alpha - n) * s + n;
    if (!(denom > 0.0)) {
        std::ostringstream os;
        os << "int_B |x|^{(alpha-n)s} dx diverges: need s < n/(n-alpha) = "
           << n / (n - alpha);
        throw DivergenceError(os.str());
    }
    const double t = n / (n - alpha);
    const double cn = unit_ball_volume(n);
    return std::pow(std::pow(cn, s / t - 1.0) * sphere_surface(n) / denom, 1.0 / s);
}

double riesz_centered_ball_value(double alpha, double s, int n, double R) {
    KernelParams{alpha, 0.0, n}.validate();
    const double denom = (alpha - n) * s + n;
    if (!(denom > 0.0)) throw DivergenceError("centered ball integral diverges");
    if (!(R > 0.0)) throw ConfigError("R must be positive");
    const double t = n / (n - alpha);
    const double cn = unit_ball_volume(n);
    // |B(0,R)|^{s/t-1} * omega_{n-1} R^{(alpha-n)s+n} / ((alpha-n)s+n), to 1/s.
    const double ball = std::pow(cn * std::pow(R, n), s / t - 1.0);
    const double integral = sphere_surface(n) * std::pow(R, denom) / denom;
    return std::pow(ball * integral, 1.0 / s);
}

} // namespace morrey
