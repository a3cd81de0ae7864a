#pragma once

#include <string>
#include <vector>

namespace morrey {

// One-piece closed-form law c * r^e; c = 0 means identically zero.
struct PowerLaw {
    double c = 0.0;
    double e = 0.0;
    double operator()(double r) const;
};

// Weight phi(r) against which Morrey ball averages are measured.  Either a
// pure power c * r^a or a positive log-log table (interpolated linearly in
// log-log, extended beyond its range by the end slopes).  The classical
// second-index-q space corresponds to phi(r) = |B(0,r)|^{-1/q}.
class ShapeFunction {
public:
    enum class Kind { Power, Table };

    // c * r^{-n/q}
    static ShapeFunction power(int dim, double q, double c = 1.0);
    // c * r^a with the exponent given directly
    static ShapeFunction power_exponent(double c, double a);
    // |B(0,r)|^{-1/q} = C_n^{-1/q} r^{-n/q}; makes the weighted ball-average
    // norm coincide with the classical two-index norm.
    static ShapeFunction classical(int dim, double q);
    // tabulated positive samples on increasing radii spanning >= 4 decades
    static ShapeFunction table(std::vector<double> r, std::vector<double> v);

    Kind kind() const { return kind_; }
    bool is_power() const { return kind_ == Kind::Power; }

    double operator()(double r) const;

    // Power-law accessors (throw on tables).
    double exponent() const;
    double coeff() const;

    // Local log-log slope: exact for powers, cellwise for tables, end slopes
    // beyond the table.
    double exponent_at(double r) const;
    double head_exponent() const;
    double tail_exponent() const;
    PowerLaw head_law() const;
    PowerLaw tail_law() const;

    // phi(r) * mul * r^{extra}; powers stay powers, tables are remapped.
    ShapeFunction scaled(double extra_exponent, double mul = 1.0) const;

    // Second Morrey index q = -n/exponent for decaying powers (q > 0).
    bool has_power_q(int dim) const;
    double power_q(int dim) const;

    const std::vector<double>& table_radii() const { return r_; }
    const std::vector<double>& table_values() const { return v_; }

    std::string describe() const;

private:
    ShapeFunction() = default;
    Kind kind_ = Kind::Power;
    double coeff_ = 1.0;
    double exp_ = 0.0;
    std::vector<double> r_, v_; // table samples
};

// phi in G_p: phi almost decreasing and phi^p(r) r^n almost increasing.  The
// report carries the best constants found and the doubling constant they
// imply; "pass" means both constants stay below the cap.
struct GpReport {
    double almost_decreasing = 1.0;
    double almost_increasing = 1.0;
    double doubling = 1.0;
    double cap = 100.0;
    bool pass = false;
};
GpReport check_class_gp(const ShapeFunction& phi, double p, int n, double cap = 100.0);

// The three growth/integrability conditions used by the operator bounds:
//   (I)   int_R^inf  phi(r) r^{n/t'-1} dr          <= C phi(R) R^{n/t'}
//   (II)  int_0^R    phi^{p1}(r) r^{n-1} dr        <= C phi^{p1}(R) R^n
//   (III) int_0^R    r^{n-1} / (phi^{s'} r^{n s'}) dr
//                                          <= C R^n / (phi^{s'}(R) R^{n s'})
// "param" is t for (I), p1 for (II), s' for (III).  Pure powers get the exact
// antiderivative constant; tables (or force_quadrature) get the supremum of
// LHS/RHS over a log lattice of R.  Divergent integrals raise
// DivergenceError naming the endpoint.
enum class Condition { I, II, III };
struct ConditionReport {
    Condition which;
    double constant = 0.0;
    bool by_antiderivative = false;
};
ConditionReport check_integral_condition(Condition which, const ShapeFunction& phi,
                                         int n, double param,
                                         bool force_quadrature = false);

// psi(r) = phi(r) r^{n/t'} (with n/t' = n(1-1/t)) and rho(r) = phi(r) r^n.
struct DerivedShapes {
    ShapeFunction psi;
    ShapeFunction rho;
};
DerivedShapes derive_shapes(const ShapeFunction& phi, double t, int n);

} // namespace morrey
