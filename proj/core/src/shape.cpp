#include "morrey/shape.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "morrey/constants.hpp"
#include "morrey/errors.hpp"
#include "morrey/quadrature.hpp"

namespace morrey {

double PowerLaw::operator()(double r) const {
    if (c == 0.0) return 0.0;
    return c * std::pow(r, e);
}

ShapeFunction ShapeFunction::power(int dim, double q, double c) {
    if (dim < 1) throw ConfigError("shape: dim must be >= 1");
    if (q <= 0.0) throw ConfigError("shape: power q must be > 0");
    if (c <= 0.0) throw ConfigError("shape: power coefficient must be > 0");
    return power_exponent(c, -static_cast<double>(dim) / q);
}

ShapeFunction ShapeFunction::power_exponent(double c, double a) {
    if (c <= 0.0) throw ConfigError("shape: power coefficient must be > 0");
    ShapeFunction s;
    s.kind_ = Kind::Power;
    s.coeff_ = c;
    s.exp_ = a;
    return s;
}

ShapeFunction ShapeFunction::classical(int dim, double q) {
    return power(dim, q, std::pow(unit_ball_volume(dim), -1.0 / q));
}

ShapeFunction ShapeFunction::table(std::vector<double> r, std::vector<double> v) {
    if (r.size() < 2 || r.size() != v.size())
        throw ConfigError("shape table: need matching radius/value arrays, >= 2 points");
    for (size_t i = 0; i < r.size(); ++i) {
        if (!(r[i] > 0.0) || !(v[i] > 0.0))
            throw ConfigError("shape table: radii and values must be positive");
        if (i > 0 && !(r[i] > r[i - 1]))
            throw ConfigError("shape table: radii must be strictly increasing");
    }
    if (r.back() / r.front() < 1e4 * (1.0 - 1e-12))
        throw ConfigError("shape table: must span at least 4 decades of radius");
    ShapeFunction s;
    s.kind_ = Kind::Table;
    s.r_ = std::move(r);
    s.v_ = std::move(v);
    return s;
}

double ShapeFunction::operator()(double r) const {
    if (!(r > 0.0)) throw ConfigError("shape: argument must be > 0");
    if (kind_ == Kind::Power) return coeff_ * std::pow(r, exp_);
    if (r <= r_.front()) return head_law()(r);
    if (r >= r_.back()) return tail_law()(r);
    auto it = std::upper_bound(r_.begin(), r_.end(), r);
    size_t k = static_cast<size_t>(it - r_.begin()) - 1;
    double t = std::log(r / r_[k]) / std::log(r_[k + 1] / r_[k]);
    return std::exp((1.0 - t) * std::log(v_[k]) + t * std::log(v_[k + 1]));
}

double ShapeFunction::exponent() const {
    if (kind_ != Kind::Power) throw ConfigError("shape: exponent() needs a power shape");
    return exp_;
}

double ShapeFunction::coeff() const {
    if (kind_ != Kind::Power) throw ConfigError("shape: coeff() needs a power shape");
    return coeff_;
}

double ShapeFunction::exponent_at(double r) const {
    if (kind_ == Kind::Power) return exp_;
    if (r <= r_.front()) return head_exponent();
    if (r >= r_.back()) return tail_exponent();
    auto it = std::upper_bound(r_.begin(), r_.end(), r);
    size_t k = static_cast<size_t>(it - r_.begin()) - 1;
    return std::log(v_[k + 1] / v_[k]) / std::log(r_[k + 1] / r_[k]);
}

double ShapeFunction::head_exponent() const {
    if (kind_ == Kind::Power) return exp_;
    return std::log(v_[1] / v_[0]) / std::log(r_[1] / r_[0]);
}

double ShapeFunction::tail_exponent() const {
    if (kind_ == Kind::Power) return exp_;
    size_t m = r_.size();
    return std::log(v_[m - 1] / v_[m - 2]) / std::log(r_[m - 1] / r_[m - 2]);
}

PowerLaw ShapeFunction::head_law() const {
    if (kind_ == Kind::Power) return {coeff_, exp_};
    double e = head_exponent();
    return {v_.front() * std::pow(r_.front(), -e), e};
}

PowerLaw ShapeFunction::tail_law() const {
    if (kind_ == Kind::Power) return {coeff_, exp_};
    double e = tail_exponent();
    return {v_.back() * std::pow(r_.back(), -e), e};
}

ShapeFunction ShapeFunction::scaled(double extra_exponent, double mul) const {
    if (!(mul > 0.0)) throw ConfigError("shape: scale factor must be > 0");
    if (kind_ == Kind::Power) return power_exponent(coeff_ * mul, exp_ + extra_exponent);
    ShapeFunction s;
    s.kind_ = Kind::Table;
    s.r_ = r_;
    s.v_.resize(v_.size());
    for (size_t i = 0; i < v_.size(); ++i)
        s.v_[i] = v_[i] * mul * std::pow(r_[i], extra_exponent);
    return s;
}

bool ShapeFunction::has_power_q(int dim) const {
    return kind_ == Kind::Power && exp_ < 0.0 && dim >= 1;
}

double ShapeFunction::power_q(int dim) const {
    if (!has_power_q(dim)) throw ConfigError("shape: no power second index for this shape");
    return -static_cast<double>(dim) / exp_;
}

std::string ShapeFunction::describe() const {
    std::ostringstream os;
    if (kind_ == Kind::Power) {
        os << coeff_ << "*r^" << exp_;
    } else {
        os << "table[" << r_.size() << " pts, r in " << r_.front() << ".." << r_.back() << "]";
    }
    return os.str();
}

namespace {

// Scan lattice for table-based class/condition checks: the table's own knots
// thinned to at most max_pts.
std::vector<double> scan_lattice(const ShapeFunction& phi, size_t max_pts) {
    std::vector<double> out;
    if (phi.is_power()) {
        size_t m = 129;
        out.reserve(m);
        for (size_t i = 0; i < m; ++i)
            out.push_back(std::pow(10.0, -4.0 + 8.0 * double(i) / double(m - 1)));
        return out;
    }
    const auto& r = phi.table_radii();
    size_t stride = std::max<size_t>(1, r.size() / max_pts);
    for (size_t i = 0; i < r.size(); i += stride) out.push_back(r[i]);
    if (out.back() != r.back()) out.push_back(r.back());
    return out;
}

} // namespace

GpReport check_class_gp(const ShapeFunction& phi, double p, int n, double cap) {
    if (p < 1.0) throw ConfigError("class check: p must be >= 1");
    if (n < 1) throw ConfigError("class check: dim must be >= 1");
    GpReport rep;
    rep.cap = cap;
    if (phi.is_power()) {
        // Over the reference window [1e-4, 1e4] the worst pair ratio for a
        // pure power r^a is (1e8)^{|slope|} on the side where monotonicity
        // fails, and exactly 1 otherwise.
        double a = phi.exponent();
        double b = p * a + n; // slope of phi^p r^n in log-log
        rep.almost_decreasing = a <= 0.0 ? 1.0 : std::pow(1e8, a);
        rep.almost_increasing = b >= 0.0 ? 1.0 : std::pow(1e8, -b);
        rep.doubling = std::pow(2.0, std::fabs(a));
    } else {
        auto lat = scan_lattice(phi, 1024);
        double dec = 1.0, inc = 1.0, dbl = 1.0;
        std::vector<double> fv(lat.size()), gv(lat.size());
        for (size_t i = 0; i < lat.size(); ++i) {
            fv[i] = phi(lat[i]);
            gv[i] = std::pow(fv[i], p) * std::pow(lat[i], n);
        }
        for (size_t i = 0; i < lat.size(); ++i) {
            for (size_t j = i + 1; j < lat.size(); ++j) {
                dec = std::max(dec, fv[j] / fv[i]);
                inc = std::max(inc, gv[i] / gv[j]);
                if (lat[j] / lat[i] <= 2.0 * (1.0 + 1e-12))
                    dbl = std::max({dbl, fv[i] / fv[j], fv[j] / fv[i]});
            }
        }
        rep.almost_decreasing = dec;
        rep.almost_increasing = inc;
        rep.doubling = dbl;
    }
    rep.pass = rep.almost_decreasing <= cap && rep.almost_increasing <= cap;
    return rep;
}

namespace {

double condition_lhs(Condition which, const ShapeFunction& phi, int n, double param,
                     double R, const QuadratureOptions& q) {
    double nn = n;
    if (which == Condition::I) {
        double t = param;
        double ntp = nn * (1.0 - 1.0 / t); // n/t'
        auto g = [&](double r) { return phi(r) * std::pow(r, ntp - 1.0); };
        double split = std::max(2.0 * R, phi.is_power() ? 1e4 : phi.table_radii().back());
        double e_inf = phi.tail_exponent() + ntp - 1.0;
        if (e_inf >= -1.0)
            throw DivergenceError(
                "growth condition (I): integrand decays like r^" + std::to_string(e_inf) +
                " at infinity, integral diverges");
        return integrate(g, R, split, q) + integrate_tail(g, split, e_inf, q);
    }
    if (which == Condition::II) {
        double p1 = param;
        double eh = p1 * phi.head_exponent() + nn - 1.0;
        if (eh <= -1.0)
            throw DivergenceError(
                "growth condition (II): integrand behaves like r^" + std::to_string(eh) +
                " at the origin, integral diverges");
        auto g = [&](double r) { return std::pow(phi(r), p1) * std::pow(r, nn - 1.0); };
        double lo = std::min(R, phi.is_power() ? R : phi.table_radii().front());
        // exact head: phi follows its head power law on (0, lo]
        PowerLaw h = phi.head_law();
        double head = std::pow(h.c, p1) * std::pow(lo, eh + 1.0) / (eh + 1.0);
        return head + (lo < R ? integrate(g, lo, R, q) : 0.0);
    }
    double sd = param; // s'
    double eh = nn - 1.0 - sd * (phi.head_exponent() + nn);
    if (eh <= -1.0)
        throw DivergenceError(
            "growth condition (III): integrand behaves like r^" + std::to_string(eh) +
            " at the origin, integral diverges");
    auto g = [&](double r) {
        return std::pow(r, nn - 1.0) / std::pow(phi(r) * std::pow(r, nn), sd);
    };
    double lo = std::min(R, phi.is_power() ? R : phi.table_radii().front());
    PowerLaw h = phi.head_law();
    double head = std::pow(h.c, -sd) * std::pow(lo, eh + 1.0) / (eh + 1.0);
    return head + (lo < R ? integrate(g, lo, R, q) : 0.0);
}

double condition_rhs(Condition which, const ShapeFunction& phi, int n, double param, double R) {
    double nn = n;
    if (which == Condition::I) {
        double ntp = nn * (1.0 - 1.0 / param);
        return phi(R) * std::pow(R, ntp);
    }
    if (which == Condition::II) return std::pow(phi(R), param) * std::pow(R, nn);
    return std::pow(R, nn) / std::pow(phi(R) * std::pow(R, nn), param);
}

} // namespace

ConditionReport check_integral_condition(Condition which, const ShapeFunction& phi,
                                         int n, double param, bool force_quadrature) {
    if (n < 1) throw ConfigError("condition check: dim must be >= 1");
    if (which == Condition::I && param <= 1.0)
        throw ConfigError("condition (I): t must be > 1");
    if (which == Condition::II && param < 1.0)
        throw ConfigError("condition (II): p1 must be >= 1");
    if (which == Condition::III && param <= 0.0)
        throw ConfigError("condition (III): s' must be > 0");

    ConditionReport rep;
    rep.which = which;

    if (phi.is_power() && !force_quadrature) {
        // Exact antiderivative: LHS/RHS is independent of R for pure powers.
        double a = phi.exponent(), nn = n;
        rep.by_antiderivative = true;
        if (which == Condition::I) {
            double ntp = nn * (1.0 - 1.0 / param);
            double e = a + ntp;
            if (e >= 0.0)
                throw DivergenceError(
                    "growth condition (I): shape exponent a + n/t' = " + std::to_string(e) +
                    " >= 0, tail integral diverges");
            rep.constant = -1.0 / e;
        } else if (which == Condition::II) {
            double b = param * a + nn;
            if (b <= 0.0)
                throw DivergenceError(
                    "growth condition (II): p1*a + n = " + std::to_string(b) +
                    " <= 0, integral diverges at the origin");
            rep.constant = 1.0 / b;
        } else {
            double d = nn - param * (a + nn);
            if (d <= 0.0)
                throw DivergenceError(
                    "growth condition (III): n - s'(a + n) = " + std::to_string(d) +
                    " <= 0, integral diverges at the origin");
            rep.constant = 1.0 / d;
        }
        return rep;
    }

    QuadratureOptions q;
    q.rel_tol = 1e-9;
    double lo = 1e-2, hi = 1e2;
    if (!phi.is_power()) {
        lo = phi.table_radii().front() * 4.0;
        hi = phi.table_radii().back() / 4.0;
    }
    double best = 0.0;
    const int m = 25;
    for (int i = 0; i < m; ++i) {
        double R = lo * std::pow(hi / lo, double(i) / double(m - 1));
        double lhs = condition_lhs(which, phi, n, param, R, q);
        double rhs = condition_rhs(which, phi, n, param, R);
        best = std::max(best, lhs / rhs);
    }
    rep.constant = best;
    return rep;
}

DerivedShapes derive_shapes(const ShapeFunction& phi, double t, int n) {
    if (t < 1.0) throw ConfigError("derive_shapes: t must be >= 1");
    if (n < 1) throw ConfigError("derive_shapes: dim must be >= 1");
    double ntp = double(n) * (1.0 - 1.0 / t); // n/t', zero when t = 1
    return {phi.scaled(ntp), phi.scaled(double(n))};
}

} // namespace morrey
