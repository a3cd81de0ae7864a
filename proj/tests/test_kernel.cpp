#include <doctest.h>

#include <cmath>

#include "morrey/errors.hpp"
#include "morrey/kernel.hpp"

using namespace morrey;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("kernel point values") {
    KernelParams k{0.5, 1.0, 1};
    CHECK(eval_kernel_radial(1.0, k) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(eval_kernel_radial(4.0, k) == doctest::Approx(0.1).epsilon(1e-14));

    KernelParams riesz{0.5, 0.0, 1};
    CHECK(eval_kernel_radial(0.25, riesz) == doctest::Approx(2.0).epsilon(1e-14));

    double x[1] = {-4.0};
    CHECK(eval_kernel(x, k) == doctest::Approx(0.1).epsilon(1e-14));
    double origin[1] = {0.0};
    CHECK_THROWS_AS(eval_kernel(origin, k), SingularityError);
}

TEST_CASE("kernel parameter validation") {
    CHECK_THROWS_AS((KernelParams{0.0, 0.0, 1}.validate()), ConfigError);
    CHECK_THROWS_AS((KernelParams{1.0, 0.0, 1}.validate()), ConfigError);
    CHECK_THROWS_AS((KernelParams{0.5, -1.0, 1}.validate()), ConfigError);
    CHECK_THROWS_AS((KernelParams{0.5, 0.0, 0}.validate()), ConfigError);
    CHECK_NOTHROW((KernelParams{1.5, 2.0, 2}.validate()));
}

TEST_CASE("Lebesgue membership window") {
    LebesgueWindow w = lebesgue_membership_window(KernelParams{0.5, 1.0, 1});
    CHECK(w.t_lo == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(w.t_hi == doctest::Approx(2.0).epsilon(1e-14));

    // gamma = 0 leaves no Lebesgue exponent at all.
    CHECK_THROWS_AS(lebesgue_membership_window(KernelParams{0.5, 0.0, 1}),
                    DivergenceError);
}

TEST_CASE("Lebesgue norm reproduces the beta-function value") {
    // int_R |x|^{-1/2} (1+|x|)^{-1} dx = 2 B(1/2, 1/2) = 2 pi.
    KernelParams k{0.5, 1.0, 1};
    NormEstimate est = kernel_lebesgue_norm(k, 1.0);
    CHECK(est.value == doctest::Approx(2.0 * kPi).epsilon(1e-6));
    CHECK(est.value == doctest::Approx(2.0 * std::beta(0.5, 0.5)).epsilon(1e-6));
    CHECK(est.method == NormEstimate::Method::Quadrature);
    CHECK(est.error_indicator < 1e-6);
}

TEST_CASE("Lebesgue norm diverges at the window endpoints") {
    KernelParams k{0.5, 1.0, 1};
    CHECK_THROWS_AS(kernel_lebesgue_norm(k, 2.0), DivergenceError);
    CHECK_THROWS_AS(kernel_lebesgue_norm(k, 2.0 / 3.0), DivergenceError);
    CHECK_THROWS_AS(kernel_lebesgue_norm(k, 0.5), DivergenceError);
    CHECK_THROWS_AS(kernel_lebesgue_norm(k, 3.0), DivergenceError);
    CHECK(kernel_lebesgue_norm(k, 1.99).value > 0.0);
}

TEST_CASE("Lebesgue norm decreases with gamma") {
    double v1 = kernel_lebesgue_norm(KernelParams{0.5, 1.0, 1}, 1.0).value;
    double v2 = kernel_lebesgue_norm(KernelParams{0.5, 2.0, 1}, 1.0).value;
    CHECK(v2 < v1);
}

TEST_CASE("Riesz Morrey closed forms") {
    // n=1, alpha=1/2, s=1: (2^{-1/2} * 2 / (1/2))^1 = 2 sqrt(2).
    CHECK(riesz_morrey_closed_form(0.5, 1.0, 1) ==
          doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
    // n=2, alpha=1, s=1: pi^{-1/2} * 2 pi / 1 = 2 sqrt(pi).
    CHECK(riesz_morrey_closed_form(1.0, 1.0, 2) ==
          doctest::Approx(2.0 * std::sqrt(kPi)).epsilon(1e-12));
    // n=1, s=1 general alpha: 2^{1-alpha}/alpha.
    for (double a : {0.5, 0.25, 0.125}) {
        CHECK(riesz_morrey_closed_form(a, 1.0, 1) ==
              doctest::Approx(std::pow(2.0, 1.0 - a) / a).epsilon(1e-12));
    }
}

TEST_CASE("centered ball value is radius independent") {
    for (int n : {1, 2}) {
        for (double a : {0.25, 0.5, 0.75 * n}) {
            for (double s : {1.0, 1.25}) {
                if ((a - n) * s + n <= 0.0) continue;
                double ref = riesz_morrey_closed_form(a, s, n);
                for (int kk = -8; kk <= 8; ++kk) {
                    double R = std::pow(2.0, kk);
                    double v = riesz_centered_ball_value(a, s, n, R);
                    CHECK(v == doctest::Approx(ref).epsilon(1e-9));
                }
            }
        }
    }
}

TEST_CASE("closed form diverges outside its range") {
    // (alpha-n)s + n <= 0 makes the local integral infinite.
    CHECK_THROWS_AS(riesz_morrey_closed_form(0.25, 1.25, 2), DivergenceError);
    CHECK_THROWS_AS(riesz_morrey_closed_form(0.5, 2.0, 1), DivergenceError);
}
