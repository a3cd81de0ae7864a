#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <vector>

#include "morrey/errors.hpp"
#include "morrey/field.hpp"

using namespace morrey;

namespace {
constexpr double kPi = 3.14159265358979323846;

RadialSpec spec1() { return RadialSpec{}; }
RadialSpec spec2() {
    RadialSpec s;
    s.dim = 2;
    return s;
}
} // namespace

TEST_CASE("indicator integrals in one dimension") {
    RadialField f = build_radial_indicator(spec1(), 1.0);
    CHECK(lebesgue_integral(f, 1.0).value == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(lebesgue_norm(f, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));

    RadialIntegrator integ(f, 1.0);
    CHECK(integ.ball(Ball{{0.0}, 0.5}).value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(integ.ball(Ball{{0.0}, 1.0}).value == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(integ.ball(Ball{{0.0}, 4.0}).value == doctest::Approx(2.0).epsilon(1e-9));
    // Off-center interval [0.25, 1.25] overlaps the support in [0.25, 1].
    CHECK(integ.ball(Ball{{0.75}, 0.5}).value ==
          doctest::Approx(0.75).epsilon(1e-9));

    // Prefix integrals are monotone and saturate at the support edge.
    CHECK(integ.prefix(1.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(integ.prefix(2.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("indicator integrals in two dimensions") {
    RadialField f = build_radial_indicator(spec2(), 1.0);
    CHECK(lebesgue_integral(f, 1.0).value == doctest::Approx(kPi).epsilon(1e-9));

    RadialIntegrator integ(f, 1.0);
    // Unit disks with centers one apart: lens area 2 pi/3 - sqrt(3)/2.
    double lens = 2.0 * kPi / 3.0 - std::sqrt(3.0) / 2.0;
    CHECK(integ.ball(Ball{{1.0, 0.0}, 1.0}).value ==
          doctest::Approx(lens).epsilon(1e-3));
    // Tangent disks barely overlap.
    CHECK(integ.ball(Ball{{2.0, 0.0}, 1.0}).value < 1e-3);
}

TEST_CASE("sphere ball overlap") {
    // n=1: the sphere is the point pair {-r, +r}.
    CHECK(sphere_ball_overlap(1.0, 0.5, 1.0, 1) == doctest::Approx(1.0));
    CHECK(sphere_ball_overlap(1.0, 0.0, 2.0, 1) == doctest::Approx(2.0));
    CHECK(sphere_ball_overlap(1.0, 5.0, 1.0, 1) == doctest::Approx(0.0));
    // n=2: full circle of radius 1 inside a big ball.
    CHECK(sphere_ball_overlap(1.0, 0.0, 2.0, 2) ==
          doctest::Approx(2.0 * kPi).epsilon(1e-12));
    CHECK(sphere_ball_overlap(1.0, 3.0, 1.0, 2) == doctest::Approx(0.0));
}

TEST_CASE("gaussian and power bump integrals") {
    // Per-cell power-law chords under-estimate a gaussian (log-concave in
    // log r) by about (ln 10 / per_decade)^2 r^2 / 4 of the local mass, so
    // the integral carries a one-sided bias of ~5e-6 at the default density
    // and shrinks quadratically with the sample density.
    RadialField g = build_radial_gaussian(spec1(), 1.0);
    CHECK(lebesgue_integral(g, 1.0).value ==
          doctest::Approx(std::sqrt(2.0 * kPi)).epsilon(2e-5));
    RadialSpec dense;
    dense.per_decade = 2048;
    RadialField gd = build_radial_gaussian(dense, 1.0);
    CHECK(lebesgue_integral(gd, 1.0).value ==
          doctest::Approx(std::sqrt(2.0 * kPi)).epsilon(1e-6));

    RadialField b = build_radial_power_bump(spec1(), 0.4, 1.0);
    CHECK(lebesgue_integral(b, 1.0).value ==
          doctest::Approx(10.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("non-integrable fields raise divergence errors") {
    CHECK_THROWS_AS(build_radial_power_bump(spec1(), 1.2, 1.0), DivergenceError);

    // beta p >= n: the p-th power is no longer locally integrable.
    RadialField b = build_radial_power_bump(spec1(), 0.4, 1.0);
    CHECK_THROWS_AS(lebesgue_integral(b, 3.0), DivergenceError);
    RadialIntegrator integ(b, 3.0);
    CHECK(integ.head_divergent());
    CHECK_THROWS_AS(integ.prefix(0.5), DivergenceError);

    // The profile of a decaying power diverges at infinity for small p.
    RadialField f0 = build_radial_shape_profile(spec1(), ShapeFunction::power(1, 2.0));
    CHECK_THROWS_AS(lebesgue_integral(f0, 1.0), DivergenceError);
}

TEST_CASE("end laws") {
    RadialField chi = build_radial_indicator(spec1(), 1.0);
    CHECK(chi.head_law().c == doctest::Approx(1.0));
    CHECK(chi.head_law().e == doctest::Approx(0.0));
    CHECK(chi.tail_law().c == doctest::Approx(0.0));

    RadialField f0 = build_radial_shape_profile(spec1(), ShapeFunction::power(1, 2.0));
    CHECK(f0.head_law().e == doctest::Approx(-0.5).epsilon(1e-6));
    CHECK(f0.tail_law().e == doctest::Approx(-0.5).epsilon(1e-6));
}

TEST_CASE("dilation") {
    RadialField chi = build_radial_indicator(spec1(), 1.0);
    RadialField small = chi.dilated(4.0); // x -> chi(4x): ball of radius 1/4
    CHECK(small.eval(0.2) == doctest::Approx(1.0));
    CHECK(small.eval(0.3) == doctest::Approx(0.0));
    CHECK(lebesgue_integral(small, 1.0).value == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("cell law integrals") {
    CellLaw pw;
    pw.kind = CellLaw::Kind::Power;
    pw.c = 2.0;
    pw.e = 1.0;
    pw.r0 = 1.0; // law(r) = 2 r
    CHECK(cell_law_integral(pw, 1.0, 1, 1.0, 2.0) == doctest::Approx(3.0));

    CellLaw lin;
    lin.kind = CellLaw::Kind::Linear;
    lin.A = 1.0;
    lin.B = 1.0; // 1 + r
    CHECK(cell_law_integral(lin, 2.0, 1, 0.0, 1.0) ==
          doctest::Approx(7.0 / 3.0).epsilon(1e-8));

    CellLaw zero;
    CHECK(cell_law_integral(zero, 1.0, 1, 0.0, 5.0) == doctest::Approx(0.0));
}

TEST_CASE("grid integrals") {
    GridSpec gs;
    gs.dim = 2;
    gs.half_width = 4.0;
    gs.n_axis = 129;
    GridField f = build_grid_indicator(gs, {0.0, 0.0}, 2.0);
    CHECK(lebesgue_integral(f, 1.0).value ==
          doctest::Approx(4.0 * kPi).epsilon(0.01));

    BallIntegral inside = ball_integral(f, Ball{{0.0, 0.0}, 2.0}, 1.0);
    CHECK(inside.value == doctest::Approx(4.0 * kPi).epsilon(0.01));
    CHECK(inside.outside_fraction == doctest::Approx(0.0));

    // A ball reaching past the domain reports the missing volume fraction.
    BallIntegral part = ball_integral(f, Ball{{3.5, 0.0}, 2.0}, 1.0);
    CHECK(part.outside_fraction > 0.0);

    CHECK_THROWS_AS(ball_integral(f, Ball{{10.0, 0.0}, 1.0}, 1.0), ConfigError);
}

TEST_CASE("grid indicator mass is the exact cell count") {
    // Cell-center sampling of chi_{[-1,1]} on [-4,4]: 17 hits at N=65
    // (mass 136/65) and 33 at N=129 (mass 264/129), so the support
    // quantization error halves under refinement.
    GridSpec a;
    a.dim = 1;
    a.half_width = 4.0;
    a.n_axis = 65;
    GridSpec b = a;
    b.n_axis = 129;
    double ma = lebesgue_integral(build_grid_indicator(a, {0.0}, 1.0), 1.0).value;
    double mb = lebesgue_integral(build_grid_indicator(b, {0.0}, 1.0), 1.0).value;
    CHECK(ma == doctest::Approx(136.0 / 65.0).epsilon(1e-12));
    CHECK(mb == doctest::Approx(264.0 / 129.0).epsilon(1e-12));
    CHECK((ma - 2.0) / (mb - 2.0) == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("field round trip") {
    namespace fs = std::filesystem;
    fs::path dir = fs::path("field_io_test");

    RadialField f = build_radial_indicator(spec1(), 1.0);
    save_field(f, (dir / "radial").string());
    RadialField r(1, {0.5, 1.0}, {1.0, 1.0});
    REQUIRE(load_radial_field((dir / "radial").string(), r));
    CHECK(r.dim() == f.dim());
    REQUIRE(r.radii().size() == f.radii().size());
    CHECK(r.eval(0.7) == doctest::Approx(f.eval(0.7)));
    CHECK(r.breakpoints() == f.breakpoints());

    GridSpec gs;
    gs.dim = 1;
    gs.half_width = 2.0;
    gs.n_axis = 33;
    GridField g = build_grid_gaussian(gs, 0.5);
    save_field(g, (dir / "grid").string());
    GridField h(1, 1.0, 17);
    REQUIRE(load_grid_field((dir / "grid").string(), h));
    CHECK(h.n_axis() == g.n_axis());
    CHECK(h.half_width() == doctest::Approx(g.half_width()));
    CHECK(h.at(16) == doctest::Approx(g.at(16)));

    fs::remove_all(dir);
}
