#include "morrey/convolve.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <mutex>
#include <random>
#include <stdexcept>
#include <vector>

#include "morrey/constants.hpp"
#include "morrey/errors.hpp"

namespace morrey {

namespace {

void check_compatible(const RadialField& f, const KernelParams& k) {
    k.validate();
    if (k.dim != f.dim())
        throw std::invalid_argument("kernel and field dimensions differ");
}

[[noreturn]] void throw_divergence(const char* fmt, double x) {
    char buf[192];
    std::snprintf(buf, sizeof buf, fmt, x);
    throw DivergenceError(buf);
}

// Integrability of K * f at the given evaluation radius, decided from the
// end laws before any quadrature runs.
void check_convergence(const RadialField& f, const KernelParams& k, double R) {
    const PowerLaw hd = f.head_law(), tl = f.tail_law();
    const int n = f.dim();
    if (hd.c != 0.0 && hd.e + n <= exponent_slack)
        throw_divergence(
            "convolution diverges: f is not locally integrable near 0 "
            "(local exponent e + n = %g <= 0)",
            hd.e + n);
    if (tl.c != 0.0 && k.alpha - k.gamma + tl.e >= -exponent_slack)
        throw_divergence(
            "convolution diverges at infinity: f(r) K(r) r^{n-1} decays like "
            "r^%g with exponent >= -1",
            tl.e + k.alpha - k.gamma - 1.0);
    if (R == 0.0 && hd.c != 0.0 && hd.e + k.alpha <= exponent_slack)
        throw_divergence(
            "convolution diverges at the origin: K f has radial exponent "
            "%g <= -1 near 0",
            hd.e + k.alpha - 1.0);
}

// One-dimensional convolution: with F the even profile,
//   (K*f)(R) = int_0^inf F(r) K(R+r) dr           (A)
//            + int_0^R   F(R-w) K(w) dw           (B1)
//            + int_0^inf F(R+w) K(w) dw           (B2),
// each walked cell by cell so every adaptive panel sees one smooth law, and
// with the kernel edge at w = 0, the head edge near w = R and the analytic
// tail all peeled off explicitly.
double conv_1d(const RadialField& f, const KernelParams& k, double R,
               const QuadratureOptions& opt) {
    const double al = k.alpha, ga = k.gamma;
    const PowerLaw hd = f.head_law(), tl = f.tail_law();
    const double rlo = f.radii().front(), rhi = f.radii().back();
    auto K = [&](double w) { return eval_kernel_radial(w, k); };
    const double e_inf = tl.e + al - 1.0 - ga;

    if (R == 0.0) {
        double head = 0.0;
        if (hd.c != 0.0)
            head = integrate_edge_left(
                [&](double r) { return hd.c * std::pow(1.0 + r, -ga); }, 0.0, rlo,
                hd.e + al - 1.0, opt);
        double mid = 0.0;
        f.for_each_piece(rlo, rhi, [&](double a, double b, const CellLaw& law) {
            if (law.kind == CellLaw::Kind::Zero) return;
            mid += integrate([&](double r) { return law(r) * K(r); }, a, b, opt);
        });
        double tail = 0.0;
        if (tl.c != 0.0)
            tail = integrate_tail([&](double r) { return tl(r) * K(r); }, std::max(rhi, 1.0),
                                  e_inf, opt) +
                   (rhi < 1.0 ? integrate([&](double r) { return tl(r) * K(r); }, rhi, 1.0, opt)
                              : 0.0);
        return 2.0 * (head + mid + tail);
    }

    double A = 0.0;
    if (hd.c != 0.0) {
        if (hd.e < 0.0)
            A += integrate_edge_left([&](double r) { return hd.c * K(R + r); }, 0.0, rlo,
                                     hd.e, opt);
        else
            A += integrate([&](double r) { return hd(r) * K(R + r); }, 0.0, rlo, opt);
    }
    f.for_each_piece(rlo, rhi, [&](double a, double b, const CellLaw& law) {
        if (law.kind == CellLaw::Kind::Zero) return;
        A += integrate([&](double r) { return law(r) * K(R + r); }, a, b, opt);
    });
    if (tl.c != 0.0) {
        const double at = std::max({rhi, 2.0 * R, 1.0});
        if (at > rhi)
            A += integrate([&](double r) { return tl(r) * K(R + r); }, rhi, at, opt);
        A += integrate_tail([&](double r) { return tl(r) * K(R + r); }, at, e_inf, opt);
    }

    double B1 = 0.0;
    if (R <= rlo) {
        // The whole reflected range sits below the first sample, so both the
        // kernel edge at w = 0 and the head edge at w = R are explicit.
        if (hd.c != 0.0) {
            const double m = 0.5 * R;
            B1 += integrate_edge_left(
                [&](double w) { return std::pow(1.0 + w, -ga) * hd(R - w); }, 0.0, m,
                al - 1.0, opt);
            B1 += integrate_edge_right([&](double w) { return hd.c * K(w); }, m, R, hd.e,
                                       opt);
        }
    } else {
        // Reflect each sampled cell to w = R - r; the cell touching w = 0 (if
        // any) carries the kernel edge, every other cell is smooth inside.
        if (R > rhi && tl.c != 0.0)
            B1 += integrate_edge_left(
                [&](double w) { return std::pow(1.0 + w, -ga) * tl(R - w); }, 0.0,
                R - rhi, al - 1.0, opt);
        f.for_each_piece(rlo, std::min(R, rhi),
                         [&](double a, double b, const CellLaw& law) {
                             if (law.kind == CellLaw::Kind::Zero) return;
                             const double wa = R - b, wb = R - a;
                             if (wa <= 0.0)
                                 B1 += integrate_edge_left(
                                     [&](double w) {
                                         return std::pow(1.0 + w, -ga) * law(R - w);
                                     },
                                     0.0, wb, al - 1.0, opt);
                             else
                                 B1 += integrate(
                                     [&](double w) { return law(R - w) * K(w); }, wa, wb,
                                     opt);
                         });
        if (hd.c != 0.0)
            B1 += integrate_edge_right([&](double w) { return hd.c * K(w); }, R - rlo, R,
                                       hd.e, opt);
    }

    double B2 = 0.0;
    if (R < rlo && hd.c != 0.0)
        B2 += integrate_edge_left(
            [&](double w) { return std::pow(1.0 + w, -ga) * hd(R + w); }, 0.0, rlo - R,
            al - 1.0, opt);
    const double rstart = std::max(R, rlo);
    if (rstart < rhi)
        f.for_each_piece(rstart, rhi, [&](double a, double b, const CellLaw& law) {
            if (law.kind == CellLaw::Kind::Zero) return;
            const double wa = a - R, wb = b - R;
            if (wa <= 0.0)
                B2 += integrate_edge_left(
                    [&](double w) { return std::pow(1.0 + w, -ga) * law(R + w); }, 0.0,
                    wb, al - 1.0, opt);
            else
                B2 += integrate([&](double w) { return law(R + w) * K(w); }, wa, wb, opt);
        });
    if (tl.c != 0.0) {
        const double stop = std::max({rhi - R, R, 1.0});
        if (R >= rhi)
            B2 += integrate_edge_left(
                [&](double w) { return std::pow(1.0 + w, -ga) * tl(R + w); }, 0.0, stop,
                al - 1.0, opt);
        else if (stop > rhi - R)
            B2 += integrate([&](double w) { return tl(R + w) * K(w); }, rhi - R, stop,
                            opt);
        B2 += integrate_tail([&](double w) { return tl(R + w) * K(w); }, stop, e_inf,
                             opt);
    }

    return A + B1 + B2;
}

// Average of K over the sphere of radius r, seen from a point at distance R:
//   W(R,r) = omega_{n-2} (2Rr)^{2-n}
//              int_{(R-r)^2}^{(R+r)^2} K(sqrt(u)) [(u-a)(b-u)]^{(n-3)/2} du,
// split at the midpoint so each half carries one endpoint power.  Behaves
// like |R-r|^{alpha-1} as r -> R when alpha < 1 (and stays bounded when
// alpha > 1), which the outer integral removes as an explicit edge.
double sphere_kernel_average(double R, double r, const KernelParams& k,
                             const QuadratureOptions& opt) {
    const int n = k.dim;
    const double D = std::abs(R - r), S = R + r;
    const double a = D * D, b = S * S;
    if (!(a > 0.0))
        throw SingularityError("sphere kernel average evaluated at the collision radius");
    const double e = 0.5 * (n - 3);
    auto Ku = [&](double u) { return eval_kernel_radial(std::sqrt(u), k); };
    const double m = 0.5 * (a + b);
    const double left = integrate_edge_left(
        [&](double u) { return Ku(u) * std::pow(b - u, e); }, a, m, e, opt);
    const double right = integrate_edge_right(
        [&](double u) { return Ku(u) * std::pow(u - a, e); }, m, b, e, opt);
    return sphere_surface(n - 1) * std::pow(2.0 * R * r, 2.0 - n) * (left + right);
}

// n >= 2: (K*f)(R) = int_0^inf F(r) W(R,r) r^{n-1} dr with the head edge at
// 0, the collision edge at r = R and the analytic tail beyond the samples.
double conv_nd(const RadialField& f, const KernelParams& k, double R,
               const QuadratureOptions& opt) {
    const int n = f.dim();
    const double al = k.alpha, ga = k.gamma;
    const PowerLaw hd = f.head_law(), tl = f.tail_law();
    const double rlo = f.radii().front(), rhi = f.radii().back();
    const double e_inf = tl.e + al - 1.0 - ga;
    const double omega = sphere_surface(n);

    if (R == 0.0) {
        // W(0, r) = omega_{n-1} K(r) exactly.
        double head = 0.0;
        if (hd.c != 0.0)
            head = integrate_edge_left(
                [&](double r) { return hd.c * std::pow(1.0 + r, -ga); }, 0.0, rlo,
                hd.e + al - 1.0, opt);
        double mid = 0.0;
        f.for_each_piece(rlo, rhi, [&](double a, double b, const CellLaw& law) {
            if (law.kind == CellLaw::Kind::Zero) return;
            mid += integrate(
                [&](double r) {
                    return law(r) * eval_kernel_radial(r, k) * std::pow(r, n - 1);
                },
                a, b, opt);
        });
        double tail = 0.0;
        if (tl.c != 0.0) {
            auto g = [&](double r) {
                return tl(r) * eval_kernel_radial(r, k) * std::pow(r, n - 1);
            };
            const double at = std::max(rhi, 1.0);
            if (at > rhi) tail += integrate(g, rhi, at, opt);
            tail += integrate_tail(g, at, e_inf, opt);
        }
        return omega * (head + mid + tail);
    }

    auto W = [&](double r) { return sphere_kernel_average(R, r, k, opt); };
    const bool collision_edge = al < 1.0;
    // Weight carried by the collision edge on either side of r = R.
    auto col = [&](const auto& g, double r) {
        return g(r) * std::pow(r, n - 1) * W(r) * std::pow(std::abs(R - r), 1.0 - al);
    };
    double total = 0.0;

    if (hd.c != 0.0) {
        if (collision_edge && R <= rlo) {
            // Head edge at 0 and collision edge at R share the segment below
            // the first sample: split once and peel one edge per half.
            const double m = 0.5 * R;
            total += integrate_edge_left([&](double r) { return hd.c * W(r); }, 0.0, m,
                                         hd.e + n - 1.0, opt);
            total += integrate_edge_right([&](double r) { return col(hd, r); }, m, R,
                                          al - 1.0, opt);
            if (R < rlo)
                total += integrate_edge_left([&](double r) { return col(hd, r); }, R, rlo,
                                             al - 1.0, opt);
        } else if (R < rlo) {
            total += integrate_edge_left([&](double r) { return hd.c * W(r); }, 0.0, R,
                                         hd.e + n - 1.0, opt);
            total += integrate(
                [&](double r) { return hd(r) * W(r) * std::pow(r, n - 1); }, R, rlo, opt);
        } else {
            total += integrate_edge_left([&](double r) { return hd.c * W(r); }, 0.0, rlo,
                                         hd.e + n - 1.0, opt);
        }
    }

    f.for_each_piece(rlo, rhi, [&](double a, double b, const CellLaw& law) {
        if (law.kind == CellLaw::Kind::Zero) return;
        auto plain = [&](double x0, double x1) {
            if (!(x1 > x0)) return;
            total += integrate(
                [&](double r) { return law(r) * W(r) * std::pow(r, n - 1); }, x0, x1,
                opt);
        };
        if (!collision_edge || R <= a || R >= b) {
            if (collision_edge && R == a)
                total += integrate_edge_left([&](double r) { return col(law, r); }, a, b,
                                             al - 1.0, opt);
            else if (collision_edge && R == b)
                total += integrate_edge_right([&](double r) { return col(law, r); }, a, b,
                                              al - 1.0, opt);
            else if (a < R && R < b) {
                // W is bounded here but kinked at the collision radius.
                plain(a, R);
                plain(R, b);
            } else
                plain(a, b);
            return;
        }
        total += integrate_edge_right([&](double r) { return col(law, r); }, a, R,
                                      al - 1.0, opt);
        total += integrate_edge_left([&](double r) { return col(law, r); }, R, b,
                                     al - 1.0, opt);
    });

    if (tl.c != 0.0) {
        const double at = std::max({rhi, 2.0 * R, 1.0});
        auto g = [&](double r) { return tl(r) * W(r) * std::pow(r, n - 1); };
        if (collision_edge && R >= rhi) {
            if (R > rhi)
                total += integrate_edge_right([&](double r) { return col(tl, r); }, rhi,
                                              R, al - 1.0, opt);
            total += integrate_edge_left([&](double r) { return col(tl, r); }, R, at,
                                         al - 1.0, opt);
        } else if (R > rhi && R < at) {
            total += integrate(g, rhi, R, opt);
            total += integrate(g, R, at, opt);
        } else if (at > rhi) {
            total += integrate(g, rhi, at, opt);
        }
        total += integrate_tail(g, at, e_inf, opt);
    }
    return total;
}

} // namespace

double singular_cell_mass(const KernelParams& k, double h, const QuadratureOptions& opt) {
    k.validate();
    if (!(h > 0.0)) throw std::invalid_argument("cell radius must be positive");
    const double omega = sphere_surface(k.dim);
    if (k.gamma == 0.0) return omega * std::pow(h, k.alpha) / k.alpha;
    return omega * integrate_edge_left(
                       [&](double r) { return std::pow(1.0 + r, -k.gamma); }, 0.0, h,
                       k.alpha - 1.0, opt);
}

double apply_radial_at(const RadialField& f, const KernelParams& k, double R,
                       const QuadratureOptions& opt) {
    check_compatible(f, k);
    if (!(R >= 0.0)) throw std::invalid_argument("evaluation radius must be >= 0");
    check_convergence(f, k, R);
    return f.dim() == 1 ? conv_1d(f, k, R, opt) : conv_nd(f, k, R, opt);
}

std::vector<double> default_output_radii(const RadialField& f, int per_decade) {
    if (per_decade < 1) throw std::invalid_argument("per_decade must be >= 1");
    const double lo = f.radii().front(), hi = f.radii().back();
    const int count =
        std::max(2, static_cast<int>(std::lround(std::log10(hi / lo) * per_decade)) + 1);
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i)
        out[i] = lo * std::pow(hi / lo, double(i) / (count - 1));
    out.front() = lo;
    out.back() = hi;
    for (double bp : f.breakpoints())
        if (bp > lo && bp < hi) out.push_back(bp);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double a, double b) {
                              return std::abs(a - b) <= 1e-9 * std::max(a, b);
                          }),
              out.end());
    return out;
}

RadialField apply_radial(const RadialField& f, const KernelParams& k,
                         std::vector<double> out_radii, const QuadratureOptions& opt) {
    check_compatible(f, k);
    if (out_radii.empty()) out_radii = default_output_radii(f);
    std::vector<double> vals(out_radii.size());
    for (size_t i = 0; i < out_radii.size(); ++i)
        vals[i] = apply_radial_at(f, k, out_radii[i], opt);
    std::vector<double> bps;
    for (double bp : f.breakpoints())
        if (bp > out_radii.front() && bp < out_radii.back()) bps.push_back(bp);
    return RadialField(f.dim(), std::move(out_radii), std::move(vals), std::move(bps));
}

namespace {

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

// Kernel tap at a lattice offset; offset 0 carries the exact mass of the
// inscribed ball plus a midpoint estimate for the cube corners (the two
// coincide in one dimension, where the cell and the "ball" are the same
// interval).
struct TapSource {
    const KernelParams* k;
    double h;
    double hn;
    double w0;

    TapSource(const KernelParams& kk, double spacing) : k(&kk), h(spacing) {
        hn = std::pow(h, kk.dim);
        w0 = singular_cell_mass(kk, 0.5 * h);
        if (kk.dim >= 2) {
            const double corner_vol =
                hn - unit_ball_volume(kk.dim) * std::pow(0.5 * h, kk.dim);
            const double rep = 0.25 * h * (1.0 + std::sqrt(double(kk.dim)));
            w0 += eval_kernel_radial(rep, *k) * corner_vol;
        }
    }

    double operator()(long ox, long oy, long oz) const {
        if (ox == 0 && oy == 0 && oz == 0) return w0;
        const double rr = std::sqrt(double(ox * ox + oy * oy + oz * oz)) * h;
        return eval_kernel_radial(rr, *k) * hn;
    }
};

double direct_at(const GridField& f, const TapSource& tap, int ix, int iy, int iz) {
    const int N = f.n_axis(), d = f.dim();
    const int ny = d >= 2 ? N : 1, nz = d >= 3 ? N : 1;
    double acc = 0.0;
    for (int jz = 0; jz < nz; ++jz)
        for (int jy = 0; jy < ny; ++jy)
            for (int jx = 0; jx < N; ++jx)
                acc += tap(ix - jx, iy - jy, iz - jz) * f.at(jx, jy, jz);
    return acc;
}

GridField direct_conv(const GridField& f, const KernelParams& k) {
    const int N = f.n_axis(), d = f.dim();
    const int ny = d >= 2 ? N : 1, nz = d >= 3 ? N : 1;
    const TapSource tap(k, f.spacing());

    // Precompute the offset table (extent 2N-1 per used axis).
    const long ex = 2 * N - 1, ey = d >= 2 ? 2 * N - 1 : 1, ez = d >= 3 ? 2 * N - 1 : 1;
    std::vector<double> w(ex * ey * ez);
    for (long oz = 0; oz < ez; ++oz)
        for (long oy = 0; oy < ey; ++oy)
            for (long ox = 0; ox < ex; ++ox)
                w[(oz * ey + oy) * ex + ox] =
                    tap(ox - (N - 1), d >= 2 ? oy - (N - 1) : 0, d >= 3 ? oz - (N - 1) : 0);

    GridField out(d, f.half_width(), N);
    for (int iz = 0; iz < nz; ++iz)
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < N; ++ix) {
                double acc = 0.0;
                for (int jz = 0; jz < nz; ++jz)
                    for (int jy = 0; jy < ny; ++jy) {
                        const long base =
                            ((d >= 3 ? iz - jz + N - 1 : 0) * ey +
                             (d >= 2 ? iy - jy + N - 1 : 0)) *
                            ex;
                        for (int jx = 0; jx < N; ++jx)
                            acc += w[base + ix - jx + N - 1] * f.at(jx, jy, jz);
                    }
                out.at(ix, iy, iz) = acc;
            }
    return out;
}

GridField fast_conv(const GridField& f, const KernelParams& k) {
    const int N = f.n_axis(), d = f.dim(), M = 2 * N;
    const TapSource tap(k, f.spacing());

    int dims[3] = {M, M, M}; // row-major; x is the fastest (= last) index
    const long realT = static_cast<long>(std::pow(double(M), d));
    const long cplxT = realT / M * (M / 2 + 1);

    std::vector<double> fa(realT, 0.0), wa(realT, 0.0), ga(realT, 0.0);
    std::vector<std::complex<double>> fc(cplxT), wc(cplxT);

    fftw_plan pf, pw, pb;
    {
        std::lock_guard<std::mutex> lk(fftw_planner_mutex());
        pf = fftw_plan_dft_r2c(d, dims, fa.data(),
                               reinterpret_cast<fftw_complex*>(fc.data()), FFTW_ESTIMATE);
        pw = fftw_plan_dft_r2c(d, dims, wa.data(),
                               reinterpret_cast<fftw_complex*>(wc.data()), FFTW_ESTIMATE);
        pb = fftw_plan_dft_c2r(d, dims, reinterpret_cast<fftw_complex*>(fc.data()),
                               ga.data(), FFTW_ESTIMATE);
    }

    const int ny = d >= 2 ? N : 1, nz = d >= 3 ? N : 1;
    for (int iz = 0; iz < nz; ++iz)
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < N; ++ix)
                fa[(static_cast<long>(d >= 3 ? iz : 0) * (d >= 2 ? M : 1) +
                    (d >= 2 ? iy : 0)) *
                       M +
                   ix] = f.at(ix, iy, iz);

    // Wrap offsets modulo M; every offset in (-N, N) lands in its own slot,
    // so the circular convolution of period 2N is the exact linear one.
    auto wrap = [&](long o) { return (o % M + M) % M; };
    for (long oz = d >= 3 ? -(N - 1) : 0; oz <= (d >= 3 ? N - 1 : 0); ++oz)
        for (long oy = d >= 2 ? -(N - 1) : 0; oy <= (d >= 2 ? N - 1 : 0); ++oy)
            for (long ox = -(N - 1); ox <= N - 1; ++ox)
                wa[(wrap(oz) * (d >= 2 ? M : 1) + wrap(oy)) * M + wrap(ox)] =
                    tap(ox, oy, oz);

    fftw_execute(pf);
    fftw_execute(pw);
    for (long i = 0; i < cplxT; ++i) fc[i] *= wc[i];
    fftw_execute(pb);
    {
        std::lock_guard<std::mutex> lk(fftw_planner_mutex());
        fftw_destroy_plan(pf);
        fftw_destroy_plan(pw);
        fftw_destroy_plan(pb);
    }

    const double scale = 1.0 / double(realT);
    GridField out(d, f.half_width(), N);
    for (int iz = 0; iz < nz; ++iz)
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < N; ++ix)
                out.at(ix, iy, iz) =
                    ga[(static_cast<long>(d >= 3 ? iz : 0) * (d >= 2 ? M : 1) +
                        (d >= 2 ? iy : 0)) *
                           M +
                       ix] *
                    scale;

    // Self-check against direct sums at fixed pseudorandom sites.
    double maxf = 0.0;
    for (double v : f.data()) maxf = std::max(maxf, std::abs(v));
    double sumw = 0.0;
    for (double v : wa) sumw += std::abs(v);
    const double tol = 1e-8 * (sumw * maxf) + 1e-300;
    std::mt19937 rng(12345);
    std::uniform_int_distribution<long> dist(0, static_cast<long>(f.cells()) - 1);
    for (int probe = 0; probe < 8; ++probe) {
        const long q = dist(rng);
        const int ix = static_cast<int>(q % N);
        const int iy = d >= 2 ? static_cast<int>((q / N) % N) : 0;
        const int iz = d >= 3 ? static_cast<int>(q / N / N) : 0;
        const double want = direct_at(f, tap, ix, iy, iz);
        const double got = out.at(ix, iy, iz);
        if (std::abs(want - got) > tol) {
            char buf[192];
            std::snprintf(buf, sizeof buf,
                          "fast grid convolution disagrees with direct summation "
                          "at a probe site: direct %.12g vs fast %.12g",
                          want, got);
            throw AliasingError(buf);
        }
    }
    return out;
}

} // namespace

GridField apply_grid(const GridField& f, const KernelParams& k, GridConvMode mode) {
    k.validate();
    if (k.dim != f.dim())
        throw std::invalid_argument("kernel and field dimensions differ");
    const double ops = double(f.cells()) * double(f.cells());
    GridConvMode m = mode;
    if (m == GridConvMode::Auto)
        m = ops > 2e8 ? GridConvMode::Fast : GridConvMode::Direct;
    if (m == GridConvMode::Direct && ops > 2e10)
        throw std::invalid_argument(
            "direct grid convolution would exceed 2e10 multiply-adds; use the fast mode");
    return m == GridConvMode::Direct ? direct_conv(f, k) : fast_conv(f, k);
}

double grid_interpolate(const GridField& f, std::span<const double> x) {
    const int d = f.dim();
    if (static_cast<int>(x.size()) != d)
        throw std::invalid_argument("point dimension does not match the grid");
    const double h = f.spacing(), L = f.half_width();
    const int N = f.n_axis();
    int i0[3] = {0, 0, 0};
    double fr[3] = {0.0, 0.0, 0.0};
    for (int ax = 0; ax < d; ++ax) {
        const double t = (x[ax] + L) / h - 0.5;
        const double fl = std::floor(t);
        i0[ax] = static_cast<int>(fl);
        fr[ax] = t - fl;
    }
    auto sample = [&](int ix, int iy, int iz) -> double {
        if (ix < 0 || ix >= N) return 0.0;
        if (d >= 2 && (iy < 0 || iy >= N)) return 0.0;
        if (d >= 3 && (iz < 0 || iz >= N)) return 0.0;
        return f.at(ix, d >= 2 ? iy : 0, d >= 3 ? iz : 0);
    };
    double acc = 0.0;
    for (int cz = 0; cz <= (d >= 3 ? 1 : 0); ++cz)
        for (int cy = 0; cy <= (d >= 2 ? 1 : 0); ++cy)
            for (int cx = 0; cx <= 1; ++cx) {
                double wgt = cx ? fr[0] : 1.0 - fr[0];
                if (d >= 2) wgt *= cy ? fr[1] : 1.0 - fr[1];
                if (d >= 3) wgt *= cz ? fr[2] : 1.0 - fr[2];
                acc += wgt * sample(i0[0] + cx, i0[1] + cy, i0[2] + cz);
            }
    return acc;
}

GridField dilate_grid(const GridField& f, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    const int d = f.dim(), N = f.n_axis();
    const int ny = d >= 2 ? N : 1, nz = d >= 3 ? N : 1;
    GridField out(d, f.half_width(), N);
    double x[3];
    for (int iz = 0; iz < nz; ++iz)
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < N; ++ix) {
                x[0] = lambda * f.coord(ix);
                if (d >= 2) x[1] = lambda * f.coord(iy);
                if (d >= 3) x[2] = lambda * f.coord(iz);
                out.at(ix, iy, iz) = grid_interpolate(f, std::span<const double>(x, d));
            }
    return out;
}

double dilation_defect(const RadialField& f, const KernelParams& k, double lambda,
                       const std::vector<double>& probe_radii,
                       const QuadratureOptions& opt) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    const RadialField fl = f.dilated(lambda);
    const double s = std::pow(lambda, -k.alpha);
    double defect = 0.0;
    for (double R : probe_radii) {
        const double a = apply_radial_at(fl, k, R, opt);
        const double b = s * apply_radial_at(f, k, lambda * R, opt);
        const double den = std::max({std::abs(a), std::abs(b), 1e-300});
        defect = std::max(defect, std::abs(a - b) / den);
    }
    return defect;
}

double dilation_defect(const GridField& f, const KernelParams& k, double lambda,
                       GridConvMode mode) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    const GridField g = apply_grid(f, k, mode);
    const GridField gl = apply_grid(dilate_grid(f, lambda), k, mode);
    const double s = std::pow(lambda, -k.alpha);
    const int d = f.dim(), N = f.n_axis();
    const int ny = d >= 2 ? N : 1, nz = d >= 3 ? N : 1;
    const double L = f.half_width(), h = f.spacing();

    std::vector<double> ref, cand;
    double peak = 0.0;
    double lx[3];
    for (int iz = 0; iz < nz; ++iz)
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < N; ++ix) {
                lx[0] = lambda * f.coord(ix);
                if (d >= 2) lx[1] = lambda * f.coord(iy);
                if (d >= 3) lx[2] = lambda * f.coord(iz);
                bool inside = true;
                for (int ax = 0; ax < d; ++ax)
                    if (std::abs(lx[ax]) > L - h) inside = false;
                if (!inside) continue;
                const double b = s * grid_interpolate(g, std::span<const double>(lx, d));
                ref.push_back(b);
                cand.push_back(gl.at(ix, iy, iz));
                peak = std::max(peak, std::abs(b));
            }
    double sum = 0.0;
    size_t kept = 0;
    for (size_t i = 0; i < ref.size(); ++i) {
        if (std::abs(ref[i]) < 0.01 * peak) continue;
        const double den = std::max(std::abs(ref[i]), std::abs(cand[i]));
        sum += std::abs(cand[i] - ref[i]) / den;
        ++kept;
    }
    return kept ? sum / kept : 0.0;
}

} // namespace morrey
