#include "morrey/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "morrey/constants.hpp"
#include "morrey/errors.hpp"

namespace morrey {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

HypothesisCheck condition_check(Condition which, std::string name,
                                const ShapeFunction& phi, int n, double param) {
    HypothesisCheck h;
    h.name = std::move(name);
    try {
        ConditionReport c = check_integral_condition(which, phi, n, param);
        h.holds = true;
        h.constant = c.constant;
        h.note = c.by_antiderivative ? "antiderivative" : "quadrature";
    } catch (const DivergenceError& e) {
        h.holds = false;
        h.constant = kInf;
        h.note = e.what();
    }
    return h;
}

HypothesisCheck class_check(const ShapeFunction& phi, double p, int n) {
    GpReport gp = check_class_gp(phi, p, n);
    HypothesisCheck h;
    h.name = fmt("phi almost decreasing, phi^p r^n almost increasing (p = %g)", p);
    h.holds = gp.pass;
    h.constant = std::max(gp.almost_decreasing, gp.almost_increasing);
    if (!gp.pass) h.note = "a monotonicity constant exceeds the cap";
    return h;
}

// Exponent window shared by the convolution estimates.  strict_s selects the
// lower-bound variant, which needs s > 1 so that s' is finite.
HypothesisCheck branch_check(const KernelParams& k, double p1, double s, double t,
                             bool strict_s) {
    const double n = k.dim;
    const double t_hi = n / (n - k.alpha);
    const double s_floor = strict_s ? 1.0 + 1e-12 : 1.0;
    HypothesisCheck h;
    if (k.gamma == 0.0) {
        h.name = strict_s ? "1 <= p1 < t, 1 < s < t = n/(n-alpha)"
                          : "1 <= p1 < t, 1 <= s < t = n/(n-alpha)";
        h.holds = p1 >= 1.0 && p1 < t && s >= s_floor && s < t &&
                  std::abs(t - t_hi) <= 1e-9 * t_hi;
        h.constant = t_hi;
        if (!h.holds) h.note = fmt("gamma = 0 needs t = n/(n-alpha) = %g", t_hi);
    } else {
        const double t_lo = n / (n + k.gamma - k.alpha);
        h.name = strict_s
                     ? "1 <= p1 <= t, 1 < s <= t, n/(n+gamma-alpha) < t < n/(n-alpha)"
                     : "1 <= p1 <= t, 1 <= s <= t, n/(n+gamma-alpha) < t < n/(n-alpha)";
        h.holds = p1 >= 1.0 && p1 <= t && s >= s_floor && s <= t && t > t_lo && t < t_hi;
        h.constant = t_hi;
        if (!h.holds) h.note = fmt("window is (%g, %g)", t_lo, t_hi);
    }
    return h;
}

// Empirical-constant spread over the dilation members (lambda > 0), as a
// max/min ratio.  Fewer than two usable members give the neutral value 1.
double dilation_spread(const std::vector<MemberResult>& ms) {
    double lo = kInf, hi = 0.0;
    int cnt = 0;
    for (const MemberResult& m : ms) {
        if (m.lambda <= 0.0 || m.vacuous) continue;
        if (!(std::isfinite(m.ratio) && m.ratio > 0.0)) continue;
        lo = std::min(lo, m.ratio);
        hi = std::max(hi, m.ratio);
        ++cnt;
    }
    return cnt >= 2 ? hi / lo : 1.0;
}

double max_finite_ratio(const std::vector<MemberResult>& ms) {
    double mx = 0.0;
    for (const MemberResult& m : ms)
        if (!m.vacuous && std::isfinite(m.ratio)) mx = std::max(mx, m.ratio);
    return mx;
}

// One corpus member of an operator estimate.  rhs_factor carries the kernel
// norm for the plain upper bound and 1 for the operator-norm estimate.
MemberResult eval_member(const CorpusMember& m, const KernelParams& k, double p1,
                         double p2, const ShapeFunction& phi, const ShapeFunction& psi,
                         double rhs_factor, const SearchOptions& opt) {
    MemberResult r;
    r.name = m.name;
    r.lambda = m.lambda;
    double fn = 0.0;
    try {
        fn = morrey_norm(m.field, p1, phi, opt).value;
    } catch (const DivergenceError& e) {
        r.vacuous = true;
        r.note = std::string("right side infinite: ") + e.what();
        return r;
    }
    if (!(fn > 0.0)) {
        r.vacuous = true;
        r.note = "zero field";
        return r;
    }
    r.rhs = rhs_factor * fn;
    try {
        RadialField conv = apply_radial(m.field, k);
        r.lhs = morrey_norm(conv, p2, psi, opt).value;
    } catch (const DivergenceError& e) {
        r.vacuous = true;
        r.note = std::string("left side infinite: ") + e.what();
        return r;
    }
    r.ratio = r.lhs / r.rhs;
    return r;
}

void require_dim(const std::vector<CorpusMember>& corpus, int dim) {
    for (const CorpusMember& m : corpus)
        if (m.field.dim() != dim)
            throw ConfigError("corpus member '" + m.name +
                              "' does not match the kernel dimension");
}

YoungMember young_member(const RadialField& f, const KernelParams& k, double p,
                         double q, double kernel_norm, double delta,
                         const QuadratureOptions& opt) {
    YoungMember m;
    try {
        m.f_norm = lebesgue_norm(f, p);
    } catch (const DivergenceError& e) {
        m.vacuous = true;
        m.pass = true; // nothing to check against an infinite right side
        m.note = std::string("||f||_p infinite: ") + e.what();
        return m;
    }
    if (!(m.f_norm > 0.0)) {
        m.vacuous = true;
        m.pass = true;
        m.note = "zero field";
        return m;
    }
    try {
        m.conv_norm = lebesgue_norm(apply_radial(f, k, {}, opt), q);
    } catch (const DivergenceError& e) {
        // A finite right side with an infinite left side is a violation, not
        // a vacuous case.
        m.ratio = kInf;
        m.pass = false;
        m.note = std::string("||K*f||_q infinite: ") + e.what();
        return m;
    }
    m.ratio = m.conv_norm / (kernel_norm * m.f_norm);
    m.pass = m.ratio <= 1.0 + delta;
    return m;
}

double young_output_exponent(double p, double t) {
    if (!(p >= 1.0)) throw InfeasibleExponentError("need p >= 1");
    if (!(t >= 1.0)) throw InfeasibleExponentError("need t >= 1");
    const double inv_q = 1.0 / p - (1.0 - 1.0 / t);
    if (!(inv_q > 0.0))
        throw InfeasibleExponentError(
            fmt("no q solves 1/q = 1/p - 1/t': p = %g >= t' = %g", p,
                dual_exponent(t)));
    return 1.0 / inv_q;
}

// Least squares slope of ln(y) against ln(x) over the finite positive pairs.
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) continue;
        if (!std::isfinite(ys[i])) continue;
        double lx = std::log(xs[i]), ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++cnt;
    }
    if (cnt < 2) return kNaN;
    double den = cnt * sxx - sx * sx;
    return den != 0.0 ? (cnt * sxy - sx * sy) / den : kNaN;
}

} // namespace

std::vector<CorpusMember> default_corpus(const RadialSpec& spec, const ShapeFunction& phi) {
    std::vector<CorpusMember> c;
    c.push_back({"indicator_R4", build_radial_indicator(spec, 4.0), 0.25});
    c.push_back({"indicator_R1", build_radial_indicator(spec, 1.0), 1.0});
    c.push_back({"indicator_R1_4", build_radial_indicator(spec, 0.25), 4.0});
    c.push_back({"gaussian", build_radial_gaussian(spec, 1.0), 0.0});
    c.push_back({"power_bump", build_radial_power_bump(spec, 0.4, 1.0), 0.0});
    c.push_back({"f0_profile", build_radial_shape_profile(spec, phi), 0.0});
    return c;
}

NormEstimate kernel_morrey_norm(const KernelParams& k, double s, double t,
                                const RadialSpec& spec, const SearchOptions& opt,
                                bool force_search) {
    k.validate();
    if (!(s >= 1.0) || !(t >= 1.0))
        throw InfeasibleExponentError("kernel Morrey norm needs s >= 1 and t >= 1");
    const double n = k.dim, a = k.alpha;
    const double local = (a - n) * s + n;
    if (local <= 0.0)
        throw DivergenceError(
            fmt("kernel Morrey norm diverges near 0: |K|^s r^{n-1} has exponent "
                "%g <= -1 ((alpha-n)s+n = %g <= 0)",
                local - 1.0, local));
    const double t_hi = n / (n - a);
    if (k.gamma == 0.0) {
        // Exactly one second index gives an R-independent centered value.
        const double zeta = n / t + a - n;
        if (std::abs(zeta) > 1e-9 * n)
            throw DivergenceError(
                fmt("kernel Morrey norm diverges: for gamma = 0 the centered-ball "
                    "value scales like R^%g; only t = n/(n-alpha) = %g gives a "
                    "finite norm",
                    zeta, t_hi));
        if (!force_search) {
            NormEstimate est;
            est.value = riesz_morrey_closed_form(a, s, k.dim);
            est.method = NormEstimate::Method::ClosedForm;
            return est;
        }
    } else {
        const double t_lo = n / (n + k.gamma - a);
        if (t > t_hi * (1.0 + 1e-9))
            throw DivergenceError(
                fmt("kernel Morrey norm diverges as R -> 0: t = %g exceeds "
                    "n/(n-alpha) = %g",
                    t, t_hi));
        if (t <= t_lo * (1.0 + 1e-9))
            throw DivergenceError(
                fmt("kernel Morrey norm diverges as R -> inf: t = %g is at or "
                    "below n/(n+gamma-alpha) = %g",
                    t, t_lo));
        if (s > t * (1.0 + 1e-9))
            throw DivergenceError(
                fmt("kernel Morrey norm diverges as R -> inf: s = %g > t = %g "
                    "makes the centered value grow like R^{n(1/t-1/s)}",
                    s, t));
    }
    RadialSpec sp = spec;
    sp.dim = k.dim;
    return morrey_norm(build_radial_kernel(sp, k), s,
                       ShapeFunction::classical(k.dim, t), opt);
}

YoungMember young_ratio(const RadialField& f, const KernelParams& k, double p, double t,
                        double delta, const QuadratureOptions& opt) {
    k.validate();
    const double q = young_output_exponent(p, t);
    const double kn = kernel_lebesgue_norm(k, t, opt).value;
    return young_member(f, k, p, q, kn, delta, opt);
}

YoungReport young_report(const std::vector<CorpusMember>& corpus, const KernelParams& k,
                         double p, double t, double delta,
                         const QuadratureOptions& opt) {
    k.validate();
    require_dim(corpus, k.dim);
    YoungReport rep;
    rep.kernel = k;
    rep.p = p;
    rep.t = t;
    rep.delta = delta;
    rep.q = young_output_exponent(p, t);
    rep.kernel_norm = kernel_lebesgue_norm(k, t, opt).value;
    rep.pass = true;
    for (const CorpusMember& m : corpus) {
        YoungMember y = young_member(m.field, k, p, rep.q, rep.kernel_norm, delta, opt);
        y.name = m.name;
        y.lambda = m.lambda;
        rep.pass = rep.pass && y.pass;
        if (!y.vacuous) rep.max_ratio = std::max(rep.max_ratio, y.ratio);
        rep.members.push_back(std::move(y));
    }
    return rep;
}

UpperBoundReport theorem_report(const std::vector<CorpusMember>& corpus,
                                const KernelParams& k, double p1, double s, double t,
                                const ShapeFunction& phi, const RadialSpec& spec,
                                const SearchOptions& opt) {
    k.validate();
    require_dim(corpus, k.dim);
    const int n = k.dim;

    UpperBoundReport rep;
    rep.kernel = k;
    std::optional<double> q1;
    if (phi.has_power_q(n)) q1 = phi.power_q(n);
    rep.exps = solve_exponents(p1, s, q1, t);
    DerivedShapes ds = derive_shapes(phi, t, n);
    rep.phi_desc = phi.describe();
    rep.psi_desc = ds.psi.describe();

    rep.hypotheses.push_back(class_check(phi, p1, n));
    rep.hypotheses.push_back(condition_check(
        Condition::I, "tail growth of phi r^{n/t'-1} controlled by phi(R) R^{n/t'}",
        phi, n, t));
    {
        HypothesisCheck h;
        h.name = "1 <= p1 < n/alpha";
        h.holds = p1 >= 1.0 && p1 < n / k.alpha;
        h.constant = n / k.alpha;
        rep.hypotheses.push_back(h);
    }
    rep.hypotheses.push_back(branch_check(k, p1, s, t, /*strict_s=*/false));

    rep.kernel_norm = kernel_morrey_norm(k, s, t, spec, opt);
    for (const CorpusMember& m : corpus)
        rep.members.push_back(eval_member(m, k, p1, rep.exps.p2, phi, ds.psi,
                                          rep.kernel_norm.value, opt));
    rep.max_ratio = max_finite_ratio(rep.members);
    rep.dilation_spread = dilation_spread(rep.members);
    rep.pass = std::isfinite(rep.max_ratio) && rep.max_ratio > 0.0 &&
               rep.dilation_spread < 2.0;
    return rep;
}

LowerBoundReport lower_bound_f0(const ShapeFunction& phi, const KernelParams& k,
                                double p1, double p2, double s, double t,
                                const RadialSpec& spec, const SearchOptions& opt) {
    k.validate();
    const int n = k.dim;

    LowerBoundReport rep;
    rep.kernel = k;
    std::optional<double> q1;
    if (phi.has_power_q(n)) q1 = phi.power_q(n);
    rep.exps = solve_exponents(p1, s, q1, t);
    if (!(std::abs(1.0 / p2 - 1.0 / rep.exps.p2) <= 1e-9))
        throw InfeasibleExponentError(
            fmt("p2 = %g does not solve 1/p2 = 1/p1 - 1/s' (expected p2 = %g)", p2,
                rep.exps.p2));
    rep.phi_desc = phi.describe();
    DerivedShapes ds = derive_shapes(phi, t, n);

    GpReport gp = check_class_gp(phi, p1, n);
    rep.hypotheses.push_back(class_check(phi, p1, n));
    {
        GpReport g1 = check_class_gp(phi, 1.0, n);
        HypothesisCheck h;
        h.name = "phi r^n almost increasing";
        h.holds = g1.almost_increasing <= g1.cap;
        h.constant = g1.almost_increasing;
        rep.hypotheses.push_back(h);
    }
    rep.hypotheses.push_back(condition_check(
        Condition::I, "tail growth of phi r^{n/t'-1} controlled by phi(R) R^{n/t'}",
        phi, n, t));
    HypothesisCheck h2 = condition_check(
        Condition::II, "local integrability of phi^{p1} r^{n-1}", phi, n, p1);
    rep.hypotheses.push_back(h2);
    // Condition (III) divergence means the dual-exponent integral that drives
    // the lower bound does not exist at all; that is a hard error.
    ConditionReport c3 =
        check_integral_condition(Condition::III, phi, n, rep.exps.s_dual);
    {
        HypothesisCheck h;
        h.name = "local integrability of r^{n-1} (phi r^n)^{-s'}";
        h.holds = true;
        h.constant = c3.constant;
        h.note = c3.by_antiderivative ? "antiderivative" : "quadrature";
        rep.hypotheses.push_back(h);
    }
    rep.hypotheses.push_back(branch_check(k, p1, s, t, /*strict_s=*/true));

    rep.bracket_lo = 1.0 / gp.almost_decreasing;
    rep.bracket_hi = h2.holds ? std::pow(n * h2.constant, 1.0 / p1) : kInf;

    RadialSpec sp = spec;
    sp.dim = n;
    RadialField f0 = build_radial_shape_profile(sp, phi);
    rep.f0_norm = morrey_norm(f0, p1, phi, opt);

    RadialField conv = apply_radial(f0, k);
    rep.if0_norm = morrey_norm(conv, p2, ds.psi, opt);
    rep.ratio0 = rep.if0_norm.value / rep.f0_norm.value;

    // Weighted kernel profile rho(r) K(r) with rho = phi r^n; the lower bound
    // says I f0 dominates it pointwise, hence also in the (p2, psi) norm.
    RadialField kf = build_radial_kernel(sp, k);
    std::vector<double> wv = kf.values();
    for (size_t i = 0; i < wv.size(); ++i) wv[i] *= ds.rho(kf.radii()[i]);
    RadialField rho_k(n, kf.radii(), std::move(wv));
    rep.rho_k_norm = morrey_norm(rho_k, p2, ds.psi, opt);

    double c_pt = kInf;
    for (size_t i = 0; i < conv.radii().size(); ++i) {
        double r = conv.radii()[i];
        if (r < 1e-2 || r > 1e2) continue;
        double dom = ds.rho(r) * eval_kernel_radial(r, k);
        if (!(dom > 0.0)) continue;
        c_pt = std::min(c_pt, conv.values()[i] / dom);
    }
    rep.c_pointwise = std::isfinite(c_pt) ? c_pt : 0.0;
    rep.c_norm = rep.rho_k_norm.value / rep.if0_norm.value;

    rep.kernel_norm_p1t = kernel_morrey_norm(k, p1, t, spec, opt);
    rep.c_lower = rep.ratio0 / rep.kernel_norm_p1t.value;
    rep.if0 = std::move(conv);

    rep.pass = std::isfinite(rep.ratio0) && rep.ratio0 > 0.0 &&
               std::isfinite(rep.c_lower) && rep.c_lower > 0.0 &&
               rep.c_pointwise > 0.0;
    return rep;
}

TwoSidedReport two_sided_report(const ShapeFunction& phi, const KernelParams& k,
                                double p1, double s, double t,
                                const std::vector<CorpusMember>& corpus,
                                const RadialSpec& spec, const SearchOptions& opt) {
    k.validate();
    require_dim(corpus, k.dim);
    const int n = k.dim;

    TwoSidedReport rep;
    rep.kernel = k;
    std::optional<double> q1;
    if (phi.has_power_q(n)) q1 = phi.power_q(n);
    rep.exps = solve_exponents(p1, s, q1, t);
    DerivedShapes ds = derive_shapes(phi, t, n);
    rep.phi_desc = phi.describe();
    rep.psi_desc = ds.psi.describe();

    // The lower-bound chain carries the full hypothesis panel; run it first
    // so its hard errors surface before any search work.
    rep.f0 = lower_bound_f0(phi, k, p1, rep.exps.p2, s, t, spec, opt);
    rep.hypotheses = rep.f0.hypotheses;
    rep.kernel_norm_p1t = rep.f0.kernel_norm_p1t.value;
    rep.kernel_norm_st = kernel_morrey_norm(k, s, t, spec, opt).value;

    for (const CorpusMember& m : corpus)
        rep.members.push_back(
            eval_member(m, k, p1, rep.exps.p2, phi, ds.psi, 1.0, opt));
    bool has_f0 = false;
    for (const CorpusMember& m : corpus) has_f0 = has_f0 || m.name == "f0_profile";
    if (!has_f0) {
        MemberResult r;
        r.name = "f0_profile";
        r.lhs = rep.f0.if0_norm.value;
        r.rhs = rep.f0.f0_norm.value;
        r.ratio = rep.f0.ratio0;
        rep.members.push_back(r);
    }

    rep.norm_estimate = max_finite_ratio(rep.members);
    rep.dilation_spread = dilation_spread(rep.members);
    rep.c4 = rep.norm_estimate / rep.kernel_norm_p1t;
    rep.c5 = rep.norm_estimate / rep.kernel_norm_st;
    rep.pass = std::isfinite(rep.c4) && rep.c4 > 0.0 && std::isfinite(rep.c5) &&
               rep.c5 > 0.0 && rep.dilation_spread < 2.0;
    return rep;
}

SweepReport alpha_sweep(const std::vector<double>& alphas, double p1, int n,
                        double gamma, const RadialSpec& spec, const SearchOptions& opt) {
    if (!(p1 >= 1.0)) throw InfeasibleExponentError("need p1 >= 1");
    SweepReport rep;
    rep.p1 = p1;
    rep.dim = n;
    rep.gamma = gamma;
    for (double a : alphas) {
        KernelParams k{a, gamma, n};
        k.validate();
        const double t = n / (n - a);
        if (!(p1 < t))
            throw InfeasibleExponentError(
                fmt("sweep needs p1 < t = n/(n-alpha) = %g at alpha = %g", t, a));
        SweepRow row;
        row.alpha = a;
        row.t = t;
        row.closed = gamma == 0.0 ? riesz_morrey_closed_form(a, p1, n) : kNaN;
        row.ball = kernel_morrey_norm(k, p1, t, spec, opt, /*force_search=*/true).value;
        // Power-shape schedule strictly inside the admissible wedge
        // p1 < q1 < s < t, so every growth condition holds with a finite
        // constant and the lower-bound chain is well posed.
        const double q1 = p1 + (t - p1) / 3.0;
        const double s = p1 + 2.0 * (t - p1) / 3.0;
        try {
            SolvedExponents ex = solve_exponents(p1, s, q1, t);
            row.ratio0 =
                lower_bound_f0(ShapeFunction::power(n, q1), k, p1, ex.p2, s, t, spec, opt)
                    .ratio0;
        } catch (const std::exception&) {
            row.ratio0 = kNaN;
        }
        rep.rows.push_back(row);
    }
    std::vector<double> xs, ys;
    for (const SweepRow& r : rep.rows) {
        xs.push_back(r.alpha);
        ys.push_back(gamma == 0.0 ? r.closed : r.ball);
    }
    rep.slope = loglog_slope(xs, ys);
    return rep;
}

} // namespace morrey
