#include "morrey/norm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <vector>

#include "morrey/constants.hpp"
#include "morrey/errors.hpp"

namespace morrey {

namespace {

struct RadiusLattice {
    std::vector<double> r;
    std::vector<char> in_half; // member of the half-density sublattice
    double geo_lo = 0.0, geo_hi = 0.0; // extremes, for edge-pin detection
};

// Geometric lattice anchored at lo (k even = half lattice), with the specials
// and hi appended to both densities so the half/full gap measures geometric
// density alone.
RadiusLattice make_radius_lattice(double lo, double hi, double step_log2, int refine,
                                  const std::vector<double>& specials) {
    if (!(lo > 0.0) || !(hi > lo))
        throw std::invalid_argument("search radius range must satisfy 0 < lo < hi");
    RadiusLattice out;
    const double step = step_log2 / refine;
    const double ratio = std::exp2(step);
    double r = lo;
    for (long k = 0; r <= hi * (1.0 + 1e-12); ++k) {
        out.r.push_back(std::min(r, hi));
        out.in_half.push_back(k % 2 == 0);
        r = lo * std::exp2(step * (k + 1));
        if (ratio <= 1.0) break; // degenerate step guard
    }
    auto append = [&](double v) {
        if (v < lo || v > hi) return;
        for (double have : out.r)
            if (std::abs(have - v) <= 1e-12 * v) return;
        out.r.push_back(v);
        out.in_half.push_back(1);
    };
    for (double s : specials) append(s);
    append(hi);
    out.geo_lo = lo;
    out.geo_hi = hi;
    return out;
}

struct SearchState {
    double best = 0.0;
    double best_half = 0.0;
    std::vector<double> best_center;
    double best_radius = 0.0;
};

void consider(SearchState& st, double val, const std::vector<double>& center, double R,
              bool half_center, bool half_radius) {
    if (val > st.best) {
        st.best = val;
        st.best_center = center;
        st.best_radius = R;
    }
    if (half_center && half_radius && val > st.best_half) st.best_half = val;
}

NormEstimate finish(const SearchState& st, const RadiusLattice& lat, int dim,
                    long centers, long radii) {
    NormEstimate est;
    est.method = NormEstimate::Method::BallSearch;
    est.value = st.best;
    est.error_indicator =
        st.best > 0.0 ? (st.best - st.best_half) / st.best : 0.0;
    est.argmax_center = st.best_center.empty() ? std::vector<double>(dim, 0.0)
                                               : st.best_center;
    est.argmax_radius = st.best_radius;
    est.radius_edge_pinned =
        st.best > 0.0 && (std::abs(st.best_radius - lat.geo_lo) <= 1e-12 * lat.geo_lo ||
                          std::abs(st.best_radius - lat.geo_hi) <= 1e-12 * lat.geo_hi);
    bool off = false;
    for (double c : est.argmax_center)
        if (c != 0.0) off = true;
    est.offcenter_argmax = st.best > 0.0 && off;
    est.centers = centers;
    est.radii = radii;
    return est;
}

int effective_stride(int stride, int refine) {
    return std::max(1, stride / std::max(1, refine));
}

} // namespace

NormEstimate morrey_norm(const RadialField& f, double p, const ShapeFunction& phi,
                         const SearchOptions& opt) {
    if (!(p >= 1.0)) throw std::invalid_argument("norm exponent p must satisfy p >= 1");
    if (opt.refine < 1) throw std::invalid_argument("refine must be >= 1");

    RadialIntegrator integ(f, p);
    if (integ.head_divergent()) {
        PowerLaw h = f.head_law();
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "weighted norm is infinite: |f|^p r^{n-1} behaves like "
                      "r^%g near 0 (exponent p*e + n - 1 <= -1)",
                      p * h.e + f.dim() - 1);
        throw DivergenceError(buf);
    }

    const int n = f.dim();
    const double cn = unit_ball_volume(n);
    const double lo = opt.radius_lo.value_or(f.radii().front());
    const double hi = opt.radius_hi.value_or(f.radii().back());
    RadiusLattice lat =
        make_radius_lattice(lo, hi, opt.radius_step_log2, opt.refine, f.breakpoints());

    // Center offsets along the first axis; by radial symmetry this loses
    // nothing relative to a full spatial sweep.
    std::vector<double> offsets{0.0};
    std::vector<char> off_half{1};
    if (!opt.centered_only) {
        const int s = effective_stride(opt.radial_center_stride, opt.refine);
        const auto& rr = f.radii();
        for (size_t j = 0; j < rr.size(); j += s) {
            if (rr[j] > hi) break;
            offsets.push_back(rr[j]);
            off_half.push_back((j / s) % 2 == 0);
        }
    }

    SearchState st;
    Ball b;
    b.center.assign(n, 0.0);
    for (size_t ci = 0; ci < offsets.size(); ++ci) {
        b.center[0] = offsets[ci];
        std::vector<double> cvec = b.center;
        for (size_t ri = 0; ri < lat.r.size(); ++ri) {
            b.radius = lat.r[ri];
            const double mass = integ.ball(b).value;
            const double val =
                std::pow(mass / (cn * std::pow(b.radius, n)), 1.0 / p) / phi(b.radius);
            consider(st, val, cvec, b.radius, off_half[ci], lat.in_half[ri]);
        }
    }
    return finish(st, lat, n, static_cast<long>(offsets.size()),
                  static_cast<long>(lat.r.size()));
}

namespace {

// Exact integral of the piecewise-constant cell profile |f|^p over the
// interval [u, v] intersected with [-L, L], via prefix sums (dim = 1).
class LinePrefix {
public:
    LinePrefix(const GridField& f, double p) : L_(f.half_width()), h_(f.spacing()) {
        const auto& d = f.data();
        cum_.assign(d.size() + 1, 0.0);
        for (size_t i = 0; i < d.size(); ++i)
            cum_[i + 1] = cum_[i] + std::pow(std::abs(d[i]), p) * h_;
    }

    double interval(double u, double v) const {
        u = std::max(u, -L_);
        v = std::min(v, L_);
        if (v <= u) return 0.0;
        return at(v) - at(u);
    }

private:
    double L_, h_;
    std::vector<double> cum_;

    // int_{-L}^{x} with fractional coverage of the cell containing x.
    double at(double x) const {
        const double t = (x + L_) / h_;
        const long i = std::clamp(static_cast<long>(std::floor(t)), 0L,
                                  static_cast<long>(cum_.size()) - 2);
        const double frac = t - i;
        return cum_[i] + (cum_[i + 1] - cum_[i]) * std::clamp(frac, 0.0, 1.0);
    }
};

} // namespace

NormEstimate morrey_norm(const GridField& f, double p, const ShapeFunction& phi,
                         const SearchOptions& opt) {
    if (!(p >= 1.0)) throw std::invalid_argument("norm exponent p must satisfy p >= 1");
    if (opt.refine < 1) throw std::invalid_argument("refine must be >= 1");

    const int n = f.dim();
    const double cn = unit_ball_volume(n);
    const double lo = opt.radius_lo.value_or(f.spacing());
    const double hi =
        opt.radius_hi.value_or(f.half_width());
    RadiusLattice lat = make_radius_lattice(lo, hi, opt.radius_step_log2, opt.refine, {});

    // Per-axis node indices anchored at the middle node (the origin).
    const int mid = f.n_axis() / 2;
    std::vector<int> idx{mid};
    std::vector<char> idx_half{1};
    if (!opt.centered_only) {
        const int s = effective_stride(opt.grid_center_stride, opt.refine);
        for (int k = 1;; ++k) {
            const bool in_half = k % 2 == 0;
            bool any = false;
            if (mid + k * s < f.n_axis()) {
                idx.push_back(mid + k * s);
                idx_half.push_back(in_half);
                any = true;
            }
            if (mid - k * s >= 0) {
                idx.push_back(mid - k * s);
                idx_half.push_back(in_half);
                any = true;
            }
            if (!any) break;
        }
    }

    SearchState st;
    long centers = 0;

    auto scan_center = [&](const std::vector<double>& c, bool half_center,
                           const std::function<double(double)>& mass_at) {
        ++centers;
        for (size_t ri = 0; ri < lat.r.size(); ++ri) {
            const double R = lat.r[ri];
            const double val =
                std::pow(mass_at(R) / (cn * std::pow(R, n)), 1.0 / p) / phi(R);
            consider(st, val, c, R, half_center, lat.in_half[ri]);
        }
    };

    if (n == 1) {
        LinePrefix pre(f, p);
        for (size_t i = 0; i < idx.size(); ++i) {
            const double a = f.coord(idx[i]);
            scan_center({a}, idx_half[i], [&](double R) { return pre.interval(a - R, a + R); });
        }
    } else {
        Ball b;
        b.center.assign(n, 0.0);
        const size_t m = idx.size();
        for (size_t iy = 0; iy < (n >= 2 ? m : 1); ++iy)
            for (size_t iz = 0; iz < (n >= 3 ? m : 1); ++iz)
                for (size_t ix = 0; ix < m; ++ix) {
                    b.center[0] = f.coord(idx[ix]);
                    if (n >= 2) b.center[1] = f.coord(idx[iy]);
                    if (n >= 3) b.center[2] = f.coord(idx[iz]);
                    const bool hc = idx_half[ix] && (n < 2 || idx_half[iy]) &&
                                    (n < 3 || idx_half[iz]);
                    scan_center(b.center, hc, [&](double R) {
                        b.radius = R;
                        return ball_integral(f, b, p).value;
                    });
                }
    }
    return finish(st, lat, n, centers, static_cast<long>(lat.r.size()));
}

NormEstimate morrey_norm_classical(const RadialField& f, double p, double q,
                                   const SearchOptions& opt) {
    return morrey_norm(f, p, ShapeFunction::classical(f.dim(), q), opt);
}

NormEstimate morrey_norm_classical(const GridField& f, double p, double q,
                                   const SearchOptions& opt) {
    return morrey_norm(f, p, ShapeFunction::classical(f.dim(), q), opt);
}

} // namespace morrey
