#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "morrey/errors.hpp"
#include "morrey/exponents.hpp"
#include "morrey/shape.hpp"

using namespace morrey;

TEST_CASE("exponent solver") {
    SolvedExponents e = solve_exponents(1.0, 1.5, 2.0, 2.0);
    CHECK(e.s_dual == doctest::Approx(3.0));
    CHECK(e.t_dual == doctest::Approx(2.0));
    CHECK(e.p2 == doctest::Approx(1.5));
    // q1 = t' exactly: the shifted second index degenerates.
    CHECK(e.q2_infeasible);
    CHECK_FALSE(e.q2.has_value());

    SolvedExponents f = solve_exponents(1.0, 5.0 / 3.0, 4.0 / 3.0, 2.0);
    CHECK(f.s_dual == doctest::Approx(2.5));
    CHECK(f.p2 == doctest::Approx(5.0 / 3.0)); // p1 = 1 forces p2 = s
    REQUIRE(f.q2.has_value());
    // 1/q2 = 3/4 - 1/2 = 1/4.
    CHECK(*f.q2 == doctest::Approx(4.0));
}

TEST_CASE("exponent solver edge cases") {
    SolvedExponents e = solve_exponents(2.0, 1.0, std::nullopt, 2.0);
    CHECK(std::isinf(e.s_dual));
    CHECK(e.p2 == doctest::Approx(2.0)); // s = 1 leaves the exponent unchanged

    SolvedExponents f = solve_exponents(1.0, 1.5, 2.0, 1.0);
    CHECK(std::isinf(f.t_dual));
    REQUIRE(f.q2.has_value());
    CHECK(*f.q2 == doctest::Approx(2.0)); // t = 1: no shift
}

TEST_CASE("exponent solver rejects p1 >= s'") {
    CHECK_THROWS_AS(solve_exponents(3.0, 1.5, std::nullopt, 2.0),
                    InfeasibleExponentError);
    CHECK_THROWS_AS(solve_exponents(4.0, 1.5, std::nullopt, 2.0),
                    InfeasibleExponentError);
    try {
        solve_exponents(3.0, 1.5, std::nullopt, 2.0);
        FAIL("expected InfeasibleExponentError");
    } catch (const InfeasibleExponentError& err) {
        CHECK(std::string(err.what()).find("1/p2 = 1/p1 - 1/s'") !=
              std::string::npos);
    }
}

TEST_CASE("shape factories") {
    ShapeFunction phi = ShapeFunction::power(1, 2.0);
    CHECK(phi.is_power());
    CHECK(phi.exponent() == doctest::Approx(-0.5));
    CHECK(phi.coeff() == doctest::Approx(1.0));
    CHECK(phi.has_power_q(1));
    CHECK(phi.power_q(1) == doctest::Approx(2.0));
    CHECK(phi(4.0) == doctest::Approx(0.5));

    ShapeFunction cl = ShapeFunction::classical(1, 2.0);
    CHECK(cl.exponent() == doctest::Approx(-0.5));
    CHECK(cl.coeff() == doctest::Approx(1.0 / std::sqrt(2.0)));

    ShapeFunction pe = ShapeFunction::power_exponent(2.0, -0.7);
    CHECK(pe.coeff() == doctest::Approx(2.0));
    CHECK(pe.exponent() == doctest::Approx(-0.7));

    CHECK_THROWS_AS(ShapeFunction::power(1, -1.0), ConfigError);
    CHECK_THROWS_AS(ShapeFunction::power_exponent(0.0, -0.5), ConfigError);
}

TEST_CASE("scaled shapes shift the exponent") {
    ShapeFunction phi = ShapeFunction::power(1, 2.0); // r^{-1/2}
    ShapeFunction psi = phi.scaled(0.5);
    CHECK(psi.exponent() == doctest::Approx(0.0));
    CHECK(psi(7.0) == doctest::Approx(1.0));
    ShapeFunction rho = phi.scaled(1.0, 3.0);
    CHECK(rho(4.0) == doctest::Approx(3.0 * std::pow(4.0, 0.5)));
}

TEST_CASE("table shapes track their power law") {
    std::vector<double> r, v;
    for (double x = 1e-3; x <= 1.1e3; x *= 1.3)
        r.push_back(x), v.push_back(std::pow(x, -0.5));
    ShapeFunction tab = ShapeFunction::table(r, v);
    CHECK_FALSE(tab.is_power());
    CHECK_THROWS_AS(tab.exponent(), ConfigError);
    CHECK(tab.exponent_at(1.0) == doctest::Approx(-0.5).epsilon(1e-6));
    CHECK(tab.head_exponent() == doctest::Approx(-0.5).epsilon(1e-6));
    CHECK(tab.tail_exponent() == doctest::Approx(-0.5).epsilon(1e-6));
    CHECK(tab.describe().size() > 0);

    // Too narrow a radius span is rejected.
    std::vector<double> r2 = {1.0, 2.0, 4.0};
    std::vector<double> v2 = {1.0, 0.7, 0.5};
    CHECK_THROWS_AS(ShapeFunction::table(r2, v2), ConfigError);
}

TEST_CASE("class membership") {
    GpReport g = check_class_gp(ShapeFunction::power(1, 2.0), 1.0, 1);
    CHECK(g.pass);
    CHECK(g.almost_decreasing == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(g.almost_increasing == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(g.doubling < 2.0);

    // phi increasing: not almost decreasing.
    GpReport bad = check_class_gp(ShapeFunction::power_exponent(1.0, 0.5), 1.0, 1);
    CHECK_FALSE(bad.pass);

    // phi^p r^n decreasing: violates the second requirement.
    GpReport bad2 = check_class_gp(ShapeFunction::power_exponent(1.0, -2.0), 1.0, 1);
    CHECK_FALSE(bad2.pass);
}

// phi(r) = r^{-1/2}, n = 1.  Antiderivatives give
//   (I)  t = 4/3: int_R^inf r^{-5/4} dr = 4 R^{-1/4} and phi R^{1/4} = R^{-1/4}
//   (II) p1 = 1:  int_0^R r^{-1/2} dr = 2 R^{1/2}  against R^{1/2}
//   (III) s' = 3/2: int_0^R r^{-3/4} dr = 4 R^{1/4} against R^{1/4}.
TEST_CASE("integral condition constants") {
    ShapeFunction phi = ShapeFunction::power(1, 2.0);

    ConditionReport c1 = check_integral_condition(Condition::I, phi, 1, 4.0 / 3.0);
    CHECK(c1.by_antiderivative);
    CHECK(c1.constant == doctest::Approx(4.0).epsilon(1e-10));

    ConditionReport c2 = check_integral_condition(Condition::II, phi, 1, 1.0);
    CHECK(c2.by_antiderivative);
    CHECK(c2.constant == doctest::Approx(2.0).epsilon(1e-10));

    ConditionReport c3 = check_integral_condition(Condition::III, phi, 1, 1.5);
    CHECK(c3.by_antiderivative);
    CHECK(c3.constant == doctest::Approx(4.0).epsilon(1e-10));

    // Quadrature path reproduces the same constants within 0.5%.
    ConditionReport q1 =
        check_integral_condition(Condition::I, phi, 1, 4.0 / 3.0, true);
    CHECK_FALSE(q1.by_antiderivative);
    CHECK(q1.constant == doctest::Approx(4.0).epsilon(5e-3));
    ConditionReport q2 = check_integral_condition(Condition::II, phi, 1, 1.0, true);
    CHECK(q2.constant == doctest::Approx(2.0).epsilon(5e-3));
    ConditionReport q3 =
        check_integral_condition(Condition::III, phi, 1, 1.5, true);
    CHECK(q3.constant == doctest::Approx(4.0).epsilon(5e-3));
}

TEST_CASE("integral conditions diverge at their thresholds") {
    ShapeFunction phi = ShapeFunction::power(1, 2.0); // r^{-1/2}
    // (I) at t = 2 (t' = 2): integrand r^{-1}, log-divergent tail.
    CHECK_THROWS_AS(check_integral_condition(Condition::I, phi, 1, 2.0),
                    DivergenceError);
    // (II) at p1 = 2: phi^2 r^0 = r^{-1}, log-divergent head.
    CHECK_THROWS_AS(check_integral_condition(Condition::II, phi, 1, 2.0),
                    DivergenceError);
    // (III) at s' = 2: integrand r^{-1} again.
    CHECK_THROWS_AS(check_integral_condition(Condition::III, phi, 1, 2.0),
                    DivergenceError);
}

TEST_CASE("derived shapes") {
    ShapeFunction phi = ShapeFunction::power(1, 2.0);
    DerivedShapes d = derive_shapes(phi, 2.0, 1);
    CHECK(d.psi.exponent() == doctest::Approx(0.0));
    CHECK(d.psi(13.0) == doctest::Approx(1.0));
    CHECK(d.rho.exponent() == doctest::Approx(0.5));

    // t = 1: t' infinite, psi reduces to phi itself.
    DerivedShapes d1 = derive_shapes(phi, 1.0, 1);
    CHECK(d1.psi.exponent() == doctest::Approx(-0.5));
}
