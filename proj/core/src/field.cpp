#include "morrey/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "morrey/constants.hpp"
#include "morrey/errors.hpp"
#include "morrey/quadrature.hpp"

namespace fs = std::filesystem;

namespace morrey {

double CellLaw::operator()(double r) const {
    switch (kind) {
    case Kind::Zero: return 0.0;
    case Kind::Power: return c * std::pow(r / r0, e);
    case Kind::Linear: return A + B * r;
    }
    return 0.0;
}

namespace {

CellLaw fit_cell(double r1, double v1, double r2, double v2) {
    CellLaw law;
    if (v1 == 0.0 && v2 == 0.0) return law;
    if ((v1 > 0.0) == (v2 > 0.0) && v1 != 0.0 && v2 != 0.0) {
        law.kind = CellLaw::Kind::Power;
        law.e = std::log(v2 / v1) / std::log(r2 / r1);
        law.c = v1;
        law.r0 = r1;
        if (std::isfinite(law.e)) return law;
    }
    law.kind = CellLaw::Kind::Linear;
    law.B = (v2 - v1) / (r2 - r1);
    law.A = v1 - law.B * r1;
    return law;
}

// End-cell extension: keep the power law if the edge cell has one, otherwise
// extend the edge sample as a constant (zero samples extend as zero).
CellLaw end_cell(const CellLaw& edge, double r_end, double v_end) {
    if (v_end == 0.0) return {};
    if (edge.kind == CellLaw::Kind::Power) return edge;
    CellLaw law;
    law.kind = CellLaw::Kind::Power;
    law.c = v_end;
    law.e = 0.0;
    law.r0 = r_end;
    return law;
}

PowerLaw plain_power(const CellLaw& law) {
    if (law.kind != CellLaw::Kind::Power || law.c == 0.0) return {0.0, 0.0};
    return {law.c * std::pow(law.r0, -law.e), law.e};
}

} // namespace

RadialField::RadialField(int dim, std::vector<double> radii, std::vector<double> values,
                         std::vector<double> breakpoints)
    : dim_(dim), r_(std::move(radii)), v_(std::move(values)), bp_(std::move(breakpoints)) {
    if (dim_ < 1) throw ConfigError("radial field: dim must be >= 1");
    if (r_.size() < 2 || r_.size() != v_.size())
        throw ConfigError("radial field: need >= 2 samples with matching arrays");
    for (size_t i = 0; i < r_.size(); ++i) {
        if (!(r_[i] > 0.0)) throw ConfigError("radial field: radii must be positive");
        if (i > 0 && !(r_[i] > r_[i - 1]))
            throw ConfigError("radial field: radii must be strictly increasing");
        if (!std::isfinite(v_[i])) throw ConfigError("radial field: values must be finite");
    }
    std::sort(bp_.begin(), bp_.end());
    bp_.erase(std::unique(bp_.begin(), bp_.end()), bp_.end());
    if (!bp_.empty() && !(bp_.front() > 0.0))
        throw ConfigError("radial field: breakpoints must be positive");
    laws_.resize(r_.size() - 1);
    for (size_t k = 0; k + 1 < r_.size(); ++k)
        laws_[k] = fit_cell(r_[k], v_[k], r_[k + 1], v_[k + 1]);
    head_ = end_cell(laws_.front(), r_.front(), v_.front());
    tail_ = end_cell(laws_.back(), r_.back(), v_.back());
}

CellLaw RadialField::law_for(double r) const {
    if (r < r_.front()) return head_;
    if (r >= r_.back()) return tail_;
    size_t k = static_cast<size_t>(std::upper_bound(r_.begin(), r_.end(), r) - r_.begin()) - 1;
    auto cell_lo = std::upper_bound(bp_.begin(), bp_.end(), r_[k]);
    auto cell_hi = std::lower_bound(cell_lo, bp_.end(), r_[k + 1]);
    if (cell_lo != cell_hi) {
        auto it = std::upper_bound(cell_lo, cell_hi, r); // first in-cell breakpoint > r
        if (it == cell_lo) return k == 0 ? head_ : laws_[k - 1];
        if (it == cell_hi) return k + 1 == laws_.size() ? tail_ : laws_[k + 1];
    }
    return laws_[k];
}

double RadialField::eval(double r) const {
    if (!(r >= 0.0)) throw ConfigError("radial field: eval radius must be >= 0");
    if (r == 0.0) {
        if (head_.kind != CellLaw::Kind::Power) return 0.0;
        if (head_.e > 0.0) return 0.0;
        if (head_.e == 0.0) return head_.c;
        return head_.c > 0 ? std::numeric_limits<double>::infinity()
                           : -std::numeric_limits<double>::infinity();
    }
    return law_for(r)(r);
}

PowerLaw RadialField::head_law() const { return plain_power(head_); }
PowerLaw RadialField::tail_law() const { return plain_power(tail_); }

void RadialField::for_each_piece(
    double lo, double hi,
    const std::function<void(double, double, const CellLaw&)>& fn) const {
    if (!(lo >= 0.0) || !(hi > lo)) throw ConfigError("for_each_piece: need 0 <= lo < hi");
    std::vector<double> cuts;
    cuts.push_back(lo);
    auto push_range = [&](const std::vector<double>& src) {
        auto it = std::upper_bound(src.begin(), src.end(), lo);
        for (; it != src.end() && *it < hi; ++it) cuts.push_back(*it);
    };
    push_range(r_);
    push_range(bp_);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        double mid = a > 0.0 ? std::sqrt(a * b) : 0.5 * b;
        fn(a, b, law_for(mid));
    }
}

RadialField RadialField::dilated(double lambda) const {
    if (!(lambda > 0.0)) throw ConfigError("dilated: lambda must be > 0");
    std::vector<double> r(r_.size()), bp(bp_.size());
    for (size_t i = 0; i < r_.size(); ++i) {
        r[i] = r_[i] / lambda;
        // one-ulp jump pairs can collapse under a non-binary scale factor
        if (i > 0 && !(r[i] > r[i - 1]))
            r[i] = std::nextafter(r[i - 1], std::numeric_limits<double>::infinity());
    }
    for (size_t i = 0; i < bp_.size(); ++i) bp[i] = bp_[i] / lambda;
    return RadialField(dim_, std::move(r), v_, std::move(bp));
}

GridField::GridField(int dim, double half_width, int n_axis)
    : dim_(dim), L_(half_width), n_(n_axis) {
    if (dim_ < 1 || dim_ > 3) throw ConfigError("grid field: dim must be 1, 2 or 3");
    if (!(L_ > 0.0)) throw ConfigError("grid field: half_width must be > 0");
    if (n_ < 17 || n_ % 2 == 0)
        throw ConfigError("grid field: n_axis must be odd and >= 17");
    size_t count = 1;
    for (int d = 0; d < dim_; ++d) count *= static_cast<size_t>(n_);
    data_.assign(count, 0.0);
}

double& GridField::at(int ix, int iy, int iz) {
    return data_[(static_cast<size_t>(iz) * n_ + iy) * n_ + ix];
}

double GridField::at(int ix, int iy, int iz) const {
    return data_[(static_cast<size_t>(iz) * n_ + iy) * n_ + ix];
}

namespace {

std::vector<double> make_radii(const RadialSpec& s) {
    if (s.dim < 1) throw ConfigError("radial spec: dim must be >= 1");
    if (!(s.r_lo > 0.0) || !(s.r_hi > s.r_lo))
        throw ConfigError("radial spec: need 0 < r_lo < r_hi");
    if (s.per_decade < 8) throw ConfigError("radial spec: per_decade must be >= 8");
    double decades = std::log10(s.r_hi / s.r_lo);
    size_t count = static_cast<size_t>(std::llround(decades * s.per_decade)) + 1;
    if (count < 2) count = 2;
    std::vector<double> r(count);
    for (size_t i = 0; i < count; ++i)
        r[i] = s.r_lo * std::pow(s.r_hi / s.r_lo, double(i) / double(count - 1));
    r.front() = s.r_lo;
    r.back() = s.r_hi;
    return r;
}

// A support cutoff sampled onto the lattice would otherwise smear over one
// cell (worth O(cell width) of mass); pin it with a one-ulp knot pair so the
// jump is represented exactly no matter where R falls relative to the lattice.
void insert_jump_knots(std::vector<double>& r, double R) {
    double Rp = std::nextafter(R, std::numeric_limits<double>::infinity());
    auto lo = std::lower_bound(r.begin(), r.end(), R);
    auto hi = std::upper_bound(lo, r.end(), Rp);
    lo = r.erase(lo, hi);
    r.insert(lo, {R, Rp});
}

void require_inside(const RadialSpec& s, double R, const char* what) {
    if (!(R >= s.r_lo * 8.0) || !(R <= s.r_hi / 8.0)) {
        std::ostringstream os;
        os << what << " radius " << R << " must sit well inside the sampled range ["
           << s.r_lo << ", " << s.r_hi << "]";
        throw ConfigError(os.str());
    }
}

} // namespace

RadialField build_radial_indicator(const RadialSpec& s, double R) {
    require_inside(s, R, "indicator");
    auto r = make_radii(s);
    insert_jump_knots(r, R);
    std::vector<double> v(r.size());
    for (size_t i = 0; i < r.size(); ++i) v[i] = r[i] <= R ? 1.0 : 0.0;
    return RadialField(s.dim, std::move(r), std::move(v), {R});
}

RadialField build_radial_shape_profile(const RadialSpec& s, const ShapeFunction& phi) {
    auto r = make_radii(s);
    std::vector<double> v(r.size());
    for (size_t i = 0; i < r.size(); ++i) v[i] = phi(r[i]);
    return RadialField(s.dim, std::move(r), std::move(v));
}

RadialField build_radial_gaussian(const RadialSpec& s, double sigma) {
    if (!(sigma > 0.0)) throw ConfigError("gaussian: sigma must be > 0");
    auto r = make_radii(s);
    std::vector<double> v(r.size());
    for (size_t i = 0; i < r.size(); ++i)
        v[i] = std::exp(-0.5 * (r[i] / sigma) * (r[i] / sigma));
    return RadialField(s.dim, std::move(r), std::move(v));
}

RadialField build_radial_power_bump(const RadialSpec& s, double beta, double R) {
    if (!(beta < s.dim)) {
        std::ostringstream os;
        os << "power bump with beta = " << beta << " >= dim = " << s.dim
           << " is not locally integrable";
        throw DivergenceError(os.str());
    }
    require_inside(s, R, "power bump");
    auto r = make_radii(s);
    insert_jump_knots(r, R);
    std::vector<double> v(r.size());
    for (size_t i = 0; i < r.size(); ++i)
        v[i] = r[i] <= R ? std::pow(r[i] / R, -beta) : 0.0;
    return RadialField(s.dim, std::move(r), std::move(v), {R});
}

RadialField build_radial_kernel(const RadialSpec& s, const KernelParams& k) {
    k.validate();
    if (k.dim != s.dim) throw ConfigError("kernel field: kernel dim must match spec dim");
    auto r = make_radii(s);
    std::vector<double> v(r.size());
    for (size_t i = 0; i < r.size(); ++i) v[i] = eval_kernel_radial(r[i], k);
    return RadialField(s.dim, std::move(r), std::move(v));
}

GridField build_grid_indicator(const GridSpec& s, const std::vector<double>& center, double R) {
    if (static_cast<int>(center.size()) != s.dim)
        throw ConfigError("grid indicator: center size must match dim");
    if (!(R > 0.0)) throw ConfigError("grid indicator: radius must be > 0");
    GridField f(s.dim, s.half_width, s.n_axis);
    int n = s.n_axis;
    int ny = s.dim >= 2 ? n : 1, nz = s.dim >= 3 ? n : 1;
    for (int iz = 0; iz < nz; ++iz)
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                double d2 = 0.0;
                double dx = f.coord(ix) - center[0];
                d2 += dx * dx;
                if (s.dim >= 2) {
                    double dy = f.coord(iy) - center[1];
                    d2 += dy * dy;
                }
                if (s.dim >= 3) {
                    double dz = f.coord(iz) - center[2];
                    d2 += dz * dz;
                }
                f.at(ix, iy, iz) = d2 <= R * R ? 1.0 : 0.0;
            }
    return f;
}

GridField build_grid_gaussian(const GridSpec& s, double sigma) {
    if (!(sigma > 0.0)) throw ConfigError("gaussian: sigma must be > 0");
    GridField f(s.dim, s.half_width, s.n_axis);
    int n = s.n_axis;
    int ny = s.dim >= 2 ? n : 1, nz = s.dim >= 3 ? n : 1;
    for (int iz = 0; iz < nz; ++iz)
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                double d2 = f.coord(ix) * f.coord(ix);
                if (s.dim >= 2) d2 += f.coord(iy) * f.coord(iy);
                if (s.dim >= 3) d2 += f.coord(iz) * f.coord(iz);
                f.at(ix, iy, iz) = std::exp(-0.5 * d2 / (sigma * sigma));
            }
    return f;
}

double cell_law_integral(const CellLaw& law, double p, int n, double a, double b) {
    if (!(p > 0.0)) throw ConfigError("cell integral: p must be > 0");
    if (!(a >= 0.0) || !(b > a)) throw ConfigError("cell integral: need 0 <= a < b");
    switch (law.kind) {
    case CellLaw::Kind::Zero: return 0.0;
    case CellLaw::Kind::Power: {
        double E = p * law.e + n;
        double C = std::pow(std::fabs(law.c), p) * std::pow(law.r0, n);
        if (a == 0.0) {
            if (E <= 0.0) {
                std::ostringstream os;
                os << "power integral diverges at r = 0: local exponent p*e + n = " << E
                   << " <= 0";
                throw DivergenceError(os.str());
            }
            return C * std::pow(b / law.r0, E) / E;
        }
        if (E == 0.0) return C * std::log(b / a);
        return C * (std::pow(b / law.r0, E) - std::pow(a / law.r0, E)) / E;
    }
    case CellLaw::Kind::Linear: {
        auto g = [&](double r) {
            return std::pow(std::fabs(law.A + law.B * r), p) * std::pow(r, n - 1);
        };
        if (law.B != 0.0) {
            double root = -law.A / law.B;
            if (root > a && root < b) return gauss7(g, a, root) + gauss7(g, root, b);
        }
        return gauss7(g, a, b);
    }
    }
    return 0.0;
}

double sphere_ball_overlap(double r, double A, double R, int n) {
    if (!(r > 0.0) || !(R > 0.0) || !(A >= 0.0) || n < 1)
        throw ConfigError("sphere_ball_overlap: need r > 0, R > 0, A >= 0, n >= 1");
    if (n == 1) {
        double s = 0.0;
        if (std::fabs(r - A) <= R) s += 1.0;
        if (r + A <= R) s += 1.0;
        return s;
    }
    if (A == 0.0) return r <= R ? sphere_surface(n) : 0.0;
    double u = (A * A + r * r - R * R) / (2.0 * A * r);
    if (u >= 1.0) return 0.0;
    if (u <= -1.0) return sphere_surface(n);
    if (n == 2) return 2.0 * std::acos(u);
    if (n == 3) return 2.0 * pi * (1.0 - u);
    double theta = std::acos(u);
    auto g = [&](double t) { return std::pow(std::sin(t), n - 2); };
    return sphere_surface(n - 1) * gauss7(g, 0.0, theta);
}

RadialIntegrator::RadialIntegrator(const RadialField& f, double p)
    : f_(&f), p_(p), n_(f.dim()) {
    if (!(p > 0.0)) throw ConfigError("radial integrator: p must be > 0");
    const auto& r = f.radii();
    knot_.reserve(r.size() + f.breakpoints().size());
    f.for_each_piece(r.front(), r.back(), [&](double a, double b, const CellLaw& law) {
        (void)b;
        knot_.push_back(a);
        law_.push_back(law);
    });
    knot_.push_back(r.back());
    cum_.assign(knot_.size(), 0.0);
    for (size_t j = 0; j + 1 < knot_.size(); ++j)
        cum_[j + 1] = cum_[j] + cell_law_integral(law_[j], p_, n_, knot_[j], knot_[j + 1]);
    // head/tail extension cells, anchored at the table ends
    {
        PowerLaw h = f.head_law(), t = f.tail_law();
        if (h.c != 0.0) {
            head_cell_.kind = CellLaw::Kind::Power;
            head_cell_.c = h.c * std::pow(r.front(), h.e);
            head_cell_.e = h.e;
            head_cell_.r0 = r.front();
        }
        if (t.c != 0.0) {
            tail_cell_.kind = CellLaw::Kind::Power;
            tail_cell_.c = t.c * std::pow(r.back(), t.e);
            tail_cell_.e = t.e;
            tail_cell_.r0 = r.back();
        }
    }
    if (head_cell_.kind == CellLaw::Kind::Power &&
        p_ * head_cell_.e + n_ <= exponent_slack) {
        head_divergent_ = true;
    } else if (head_cell_.kind == CellLaw::Kind::Power) {
        head_full_ = cell_law_integral(head_cell_, p_, n_, 0.0, knot_.front());
    }
}

double RadialIntegrator::prefix0(double x) const {
    if (x <= knot_.front()) return 0.0;
    if (x >= knot_.back())
        return cum_.back() +
               (tail_cell_.kind == CellLaw::Kind::Zero || x == knot_.back()
                    ? 0.0
                    : cell_law_integral(tail_cell_, p_, n_, knot_.back(), x));
    size_t j =
        static_cast<size_t>(std::upper_bound(knot_.begin(), knot_.end(), x) - knot_.begin()) - 1;
    if (x == knot_[j]) return cum_[j];
    return cum_[j] + cell_law_integral(law_[j], p_, n_, knot_[j], x);
}

double RadialIntegrator::prefix(double x) const {
    if (!(x >= 0.0)) throw ConfigError("prefix: x must be >= 0");
    if (x == 0.0) return 0.0;
    if (head_divergent_) {
        std::ostringstream os;
        os << "ball integral covering the origin diverges: |f|^" << p_
           << " behaves like r^" << p_ * head_cell_.e << " near 0 and p*e + n = "
           << p_ * head_cell_.e + n_ << " <= 0";
        throw DivergenceError(os.str());
    }
    if (x < knot_.front()) {
        if (head_cell_.kind == CellLaw::Kind::Zero) return 0.0;
        return cell_law_integral(head_cell_, p_, n_, 0.0, x);
    }
    return head_full_ + prefix0(x);
}

double RadialIntegrator::segment(double x, double y) const {
    if (!(x > 0.0) || !(y >= x)) throw ConfigError("segment: need 0 < x <= y");
    if (y == x) return 0.0;
    double total = 0.0;
    double lo = std::min(y, knot_.front());
    if (x < lo && head_cell_.kind != CellLaw::Kind::Zero)
        total += cell_law_integral(head_cell_, p_, n_, x, lo);
    if (y > knot_.front()) total += prefix0(y) - prefix0(std::max(x, knot_.front()));
    return total;
}

BallIntegral RadialIntegrator::ball(const Ball& b) const {
    if (!(b.radius > 0.0)) throw ConfigError("ball integral: radius must be > 0");
    double A = 0.0;
    for (double c : b.center) A += c * c;
    A = std::sqrt(A);
    double R = b.radius;
    BallIntegral out;
    if (n_ == 1) {
        // two boundary points per shell: the near one only inside |r-A| <= R
        out.value = A <= R ? prefix(R - A) + prefix(R + A) : segment(A - R, A + R);
        return out;
    }
    double omega = sphere_surface(n_);
    if (A == 0.0) {
        out.value = omega * prefix(R);
        return out;
    }
    if (head_divergent_ && A <= R) prefix(R); // throws with the head diagnosis
    double total = 0.0;
    if (A < R) total += omega * prefix(R - A);
    double lo = std::fabs(R - A), hi = R + A;
    double W = hi - lo;
    // partially covered shell: smooth angular factor, graded chunked quadrature
    f_->for_each_piece(lo, hi, [&](double a, double c, const CellLaw& law) {
        if (law.kind == CellLaw::Kind::Zero) return;
        auto g = [&](double r) {
            return std::pow(std::fabs(law(r)), p_) * std::pow(r, n_ - 1) *
                   sphere_ball_overlap(r, A, R, n_);
        };
        int m = std::clamp(static_cast<int>(std::ceil((c - a) / (W / 24.0))), 1, 48);
        std::vector<double> cut(m + 1);
        for (int i = 0; i <= m; ++i) cut[i] = a + (c - a) * double(i) / m;
        // grade toward the shell edges where the overlap factor has sqrt kinks
        std::vector<double> pts;
        if (a == lo) {
            double w0 = cut[1] - cut[0];
            for (int halves = 4; halves >= 1; --halves)
                pts.push_back(cut[0] + w0 / std::pow(2.0, halves));
        }
        for (int i = 1; i < m; ++i) pts.push_back(cut[i]);
        if (c == hi) {
            double w1 = cut[m] - cut[m - 1];
            for (int halves = 1; halves <= 4; ++halves)
                pts.push_back(cut[m] - w1 / std::pow(2.0, halves));
        }
        pts.insert(pts.begin(), a);
        pts.push_back(c);
        std::sort(pts.begin(), pts.end());
        for (size_t i = 0; i + 1 < pts.size(); ++i)
            if (pts[i + 1] > pts[i]) total += gauss7(g, pts[i], pts[i + 1]);
    });
    out.value = total;
    return out;
}

BallIntegral ball_integral(const RadialField& f, const Ball& b, double p) {
    return RadialIntegrator(f, p).ball(b);
}

BallIntegral ball_integral(const GridField& f, const Ball& b, double p) {
    if (static_cast<int>(b.center.size()) != f.dim())
        throw ConfigError("ball integral: center size must match field dim");
    if (!(b.radius > 0.0)) throw ConfigError("ball integral: radius must be > 0");
    int dim = f.dim(), n = f.n_axis();
    double h = f.spacing(), L = f.half_width(), R = b.radius;
    double gap2 = 0.0; // squared distance from the ball center to the domain cube
    for (int ax = 0; ax < dim; ++ax) {
        double excess = std::max(0.0, std::fabs(b.center[ax]) - L);
        gap2 += excess * excess;
    }
    if (gap2 >= R * R)
        throw ConfigError("ball integral: the ball does not intersect the field domain");
    double rc = 0.5 * h * std::sqrt(double(dim));
    auto window = [&](double c) {
        int lo = static_cast<int>(std::floor((c - R + L) / h)) - 1;
        int hi = static_cast<int>(std::ceil((c + R + L) / h)) + 1;
        return std::pair<int, int>(std::max(0, lo), std::min(n - 1, hi));
    };
    auto [x0, x1] = window(b.center[0]);
    auto [y0, y1] = dim >= 2 ? window(b.center[1]) : std::pair<int, int>(0, 0);
    auto [z0, z1] = dim >= 3 ? window(b.center[2]) : std::pair<int, int>(0, 0);
    static const double sub[4] = {-0.375, -0.125, 0.125, 0.375};
    double value = 0.0, covered = 0.0;
    double cellvol = std::pow(h, dim);
    for (int iz = z0; iz <= z1; ++iz)
        for (int iy = y0; iy <= y1; ++iy)
            for (int ix = x0; ix <= x1; ++ix) {
                double dx = f.coord(ix) - b.center[0];
                double d2 = dx * dx;
                if (dim >= 2) {
                    double dy = f.coord(iy) - b.center[1];
                    d2 += dy * dy;
                }
                if (dim >= 3) {
                    double dz = f.coord(iz) - b.center[2];
                    d2 += dz * dz;
                }
                double d = std::sqrt(d2);
                double w;
                if (d >= R + rc) {
                    continue;
                } else if (d <= R - rc) {
                    w = 1.0;
                } else if (dim == 1) {
                    double ov = std::min(f.coord(ix) + 0.5 * h, b.center[0] + R) -
                                std::max(f.coord(ix) - 0.5 * h, b.center[0] - R);
                    w = std::clamp(ov, 0.0, h) / h;
                } else {
                    int inside = 0, totalpts = 0;
                    for (int sz = 0; sz < (dim >= 3 ? 4 : 1); ++sz)
                        for (int sy = 0; sy < 4; ++sy)
                            for (int sx = 0; sx < 4; ++sx) {
                                double px = f.coord(ix) + sub[sx] * h - b.center[0];
                                double q2 = px * px;
                                double py = f.coord(iy) + sub[sy] * h - b.center[1];
                                q2 += py * py;
                                if (dim >= 3) {
                                    double pz = f.coord(iz) + sub[sz] * h - b.center[2];
                                    q2 += pz * pz;
                                }
                                ++totalpts;
                                if (q2 <= R * R) ++inside;
                            }
                    w = double(inside) / double(totalpts);
                }
                if (w == 0.0) continue;
                value += std::pow(std::fabs(f.at(ix, iy, iz)), p) * w * cellvol;
                covered += w * cellvol;
            }
    BallIntegral out;
    out.value = value;
    bool fully_inside = true;
    for (int ax = 0; ax < dim; ++ax)
        if (std::fabs(b.center[ax]) + R > L) fully_inside = false;
    if (fully_inside) return out; // covered tracks the ball only up to
                                  // subsampling noise; inside the box the
                                  // truncated part is exactly zero
    double ballvol = unit_ball_volume(dim) * std::pow(R, dim);
    out.outside_fraction = std::max(0.0, 1.0 - covered / ballvol);
    return out;
}

LebesgueIntegral lebesgue_integral(const RadialField& f, double p) {
    RadialIntegrator I(f, p);
    double inner = I.prefix(f.radii().back()); // throws if the head diverges
    double head = I.prefix(f.radii().front());
    double tail = 0.0;
    PowerLaw t = f.tail_law();
    if (t.c != 0.0) {
        double E = p * t.e + f.dim();
        if (E >= 0.0) {
            std::ostringstream os;
            os << "integral diverges at infinity: |f|^" << p << " r^{n-1} decays like r^"
               << E - 1.0 << " beyond the last sample";
            throw DivergenceError(os.str());
        }
        double rb = f.radii().back();
        tail = std::pow(std::fabs(f.values().back()), p) * std::pow(rb, f.dim()) / (-E);
    }
    double omega = sphere_surface(f.dim());
    LebesgueIntegral out;
    out.value = omega * (inner + tail);
    if (out.value > 0.0) {
        out.head_fraction = omega * head / out.value;
        out.tail_fraction = omega * tail / out.value;
    }
    return out;
}

LebesgueIntegral lebesgue_integral(const GridField& f, double p) {
    double sum = 0.0;
    for (double v : f.data()) sum += std::pow(std::fabs(v), p);
    LebesgueIntegral out;
    out.value = sum * std::pow(f.spacing(), f.dim());
    return out;
}

double lebesgue_norm(const RadialField& f, double p) {
    return std::pow(lebesgue_integral(f, p).value, 1.0 / p);
}

double lebesgue_norm(const GridField& f, double p) {
    return std::pow(lebesgue_integral(f, p).value, 1.0 / p);
}

namespace {

void write_doubles(const fs::path& path, const std::vector<double>& a,
                   const std::vector<double>& b = {}) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot write " + path.string());
    os.write(reinterpret_cast<const char*>(a.data()),
             static_cast<std::streamsize>(a.size() * sizeof(double)));
    if (!b.empty())
        os.write(reinterpret_cast<const char*>(b.data()),
                 static_cast<std::streamsize>(b.size() * sizeof(double)));
}

std::vector<double> read_doubles(const fs::path& path, size_t count) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot read " + path.string());
    std::vector<double> out(count);
    is.read(reinterpret_cast<char*>(out.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (!is) throw ConfigError("short read from " + path.string());
    return out;
}

std::string fmt12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

} // namespace

void save_field(const RadialField& f, const std::string& dir) {
    fs::create_directories(dir);
    nlohmann::json h;
    h["kind"] = "radial";
    h["dim"] = f.dim();
    h["count"] = f.radii().size();
    h["breakpoints"] = f.breakpoints();
    h["encoding"] = "f64-native";
    std::ofstream os(fs::path(dir) / "header.json");
    os << h.dump(2) << "\n";
    write_doubles(fs::path(dir) / "samples.f64", f.radii(), f.values());
    std::ofstream csv(fs::path(dir) / "samples.csv");
    csv << "r,value\n";
    for (size_t i = 0; i < f.radii().size(); ++i)
        csv << fmt12(f.radii()[i]) << "," << fmt12(f.values()[i]) << "\n";
}

void save_field(const GridField& f, const std::string& dir) {
    fs::create_directories(dir);
    nlohmann::json h;
    h["kind"] = "grid";
    h["dim"] = f.dim();
    h["half_width"] = f.half_width();
    h["n_axis"] = f.n_axis();
    h["encoding"] = "f64-native";
    std::ofstream os(fs::path(dir) / "header.json");
    os << h.dump(2) << "\n";
    write_doubles(fs::path(dir) / "samples.f64", f.data());
    if (f.cells() <= 100000) {
        std::ofstream csv(fs::path(dir) / "samples.csv");
        csv << (f.dim() == 1 ? "x,value\n" : f.dim() == 2 ? "x,y,value\n" : "x,y,z,value\n");
        int n = f.n_axis();
        int ny = f.dim() >= 2 ? n : 1, nz = f.dim() >= 3 ? n : 1;
        for (int iz = 0; iz < nz; ++iz)
            for (int iy = 0; iy < ny; ++iy)
                for (int ix = 0; ix < n; ++ix) {
                    csv << fmt12(f.coord(ix));
                    if (f.dim() >= 2) csv << "," << fmt12(f.coord(iy));
                    if (f.dim() >= 3) csv << "," << fmt12(f.coord(iz));
                    csv << "," << fmt12(f.at(ix, iy, iz)) << "\n";
                }
    }
}

bool load_radial_field(const std::string& dir, RadialField& out) {
    fs::path hp = fs::path(dir) / "header.json";
    if (!fs::exists(hp)) return false;
    std::ifstream is(hp);
    nlohmann::json h = nlohmann::json::parse(is);
    if (h.at("kind").get<std::string>() != "radial") return false;
    size_t count = h.at("count").get<size_t>();
    auto all = read_doubles(fs::path(dir) / "samples.f64", 2 * count);
    std::vector<double> r(all.begin(), all.begin() + count);
    std::vector<double> v(all.begin() + count, all.end());
    std::vector<double> bp = h.at("breakpoints").get<std::vector<double>>();
    out = RadialField(h.at("dim").get<int>(), std::move(r), std::move(v), std::move(bp));
    return true;
}

bool load_grid_field(const std::string& dir, GridField& out) {
    fs::path hp = fs::path(dir) / "header.json";
    if (!fs::exists(hp)) return false;
    std::ifstream is(hp);
    nlohmann::json h = nlohmann::json::parse(is);
    if (h.at("kind").get<std::string>() != "grid") return false;
    GridField g(h.at("dim").get<int>(), h.at("half_width").get<double>(),
                h.at("n_axis").get<int>());
    g.data() = read_doubles(fs::path(dir) / "samples.f64", g.cells());
    out = g;
    return true;
}

} // namespace morrey
