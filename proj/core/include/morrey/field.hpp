#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "morrey/kernel.hpp"
#include "morrey/shape.hpp"

namespace morrey {

// Per-cell closed-form law used by radial fields: a power law anchored at a
// reference radius (v = c * (r/r0)^e, which stays in range even when e is
// huge, e.g. for gaussian cells), a linear segment when a sign change or a
// zero makes log-log interpolation impossible, or identically zero.
struct CellLaw {
    enum class Kind { Zero, Power, Linear };
    Kind kind = Kind::Zero;
    double c = 0.0, e = 0.0, r0 = 1.0; // power: c * (r/r0)^e
    double A = 0.0, B = 0.0;           // linear: A + B * r
    double operator()(double r) const;
};

// Radially symmetric field f(x) = F(|x|) given by samples on an increasing
// positive radius lattice.  Between samples the field follows the cell law;
// below the first and above the last sample it follows the end-cell power
// laws.  Breakpoints mark radii where the profile jumps or kinks: inside the
// cell containing a breakpoint the field is evaluated by extending the
// neighbouring cells' laws up to the breakpoint instead of interpolating
// across it.
class RadialField {
public:
    RadialField(int dim, std::vector<double> radii, std::vector<double> values,
                std::vector<double> breakpoints = {});

    int dim() const { return dim_; }
    const std::vector<double>& radii() const { return r_; }
    const std::vector<double>& values() const { return v_; }
    const std::vector<double>& breakpoints() const { return bp_; }

    double eval(double r) const;

    // End laws as plain powers c * r^e (c = 0: the field vanishes there).
    PowerLaw head_law() const;
    PowerLaw tail_law() const;

    // Visit maximal subintervals of [lo, hi] carrying a single closed-form
    // law, splitting at sample knots and breakpoints; fn(a, b, law).
    void for_each_piece(double lo, double hi,
                        const std::function<void(double, double, const CellLaw&)>& fn) const;

    RadialField dilated(double lambda) const; // x -> f(lambda x), represented exactly

private:
    int dim_;
    std::vector<double> r_, v_, bp_;
    std::vector<CellLaw> laws_; // laws_[k] on [r_[k], r_[k+1]]
    CellLaw head_, tail_;
    CellLaw law_for(double r) const;
};

// Scalar field sampled at the cell centers of a uniform grid on [-L, L]^n,
// n in {1, 2, 3}; n_axis odd so the origin is a sample point.
class GridField {
public:
    GridField(int dim, double half_width, int n_axis);

    int dim() const { return dim_; }
    double half_width() const { return L_; }
    int n_axis() const { return n_; }
    double spacing() const { return 2.0 * L_ / n_; }
    double coord(int i) const { return -L_ + (i + 0.5) * spacing(); }
    size_t cells() const { return data_.size(); }

    double& at(int ix, int iy = 0, int iz = 0);
    double at(int ix, int iy = 0, int iz = 0) const;
    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

private:
    int dim_;
    double L_;
    int n_;
    std::vector<double> data_; // x fastest, then y, then z
};

struct RadialSpec {
    int dim = 1;
    double r_lo = 1e-4;
    double r_hi = 1e4;
    int per_decade = 512;
};

struct GridSpec {
    int dim = 1;
    double half_width = 2.0;
    int n_axis = 257;
};

// Built-in field families.
RadialField build_radial_indicator(const RadialSpec& s, double R);
RadialField build_radial_shape_profile(const RadialSpec& s, const ShapeFunction& phi);
RadialField build_radial_gaussian(const RadialSpec& s, double sigma);
// (r/R)^{-beta} inside |x| < R, zero outside; requires beta < n.
RadialField build_radial_power_bump(const RadialSpec& s, double beta, double R);
RadialField build_radial_kernel(const RadialSpec& s, const KernelParams& k);

GridField build_grid_indicator(const GridSpec& s, const std::vector<double>& center, double R);
GridField build_grid_gaussian(const GridSpec& s, double sigma);

struct Ball {
    std::vector<double> center;
    double radius = 1.0;
};

// int_B |f|^p.  Radial fields use exact per-piece power integration against
// the sphere-overlap angular factor; grid fields sum cells with exact 1-d
// overlap fractions and 4^n subsampling of straddling cells otherwise.
// outside_fraction is the part of the ball volume beyond the represented
// domain (where grid fields are treated as zero).
struct BallIntegral {
    double value = 0.0;
    double outside_fraction = 0.0;
};
BallIntegral ball_integral(const RadialField& f, const Ball& b, double p);
BallIntegral ball_integral(const GridField& f, const Ball& b, double p);

// Precomputed prefix integrals of |f|^p r^{n-1} over the law pieces, making
// repeated ball integrals cheap (O(log #cells) plus, for off-center balls in
// n >= 2, one pass over the spherical-shell window).
class RadialIntegrator {
public:
    RadialIntegrator(const RadialField& f, double p);
    BallIntegral ball(const Ball& b) const;
    // int_0^x |f|^p r^{n-1} dr (no angular factor); throws DivergenceError
    // when the head law is not integrable.
    double prefix(double x) const;
    bool head_divergent() const { return head_divergent_; }

private:
    const RadialField* f_;
    double p_;
    int n_;
    std::vector<double> knot_;
    std::vector<CellLaw> law_; // law_[j] on [knot_[j], knot_[j+1]]
    std::vector<double> cum_;  // cum_[j] = int_{knot_[0]}^{knot_[j]}
    CellLaw head_cell_, tail_cell_;
    bool head_divergent_ = false;
    double head_full_ = 0.0;
    double prefix0(double x) const;          // from knot_[0], x >= knot_[0]
    double segment(double x, double y) const; // origin-excluded piece
};

// Surface measure of the part of the sphere of radius r centered at the
// origin that lies inside the ball of radius R whose center sits at distance
// A (angular overlap factor; n = 1 counts points, 0, 1 or 2).
double sphere_ball_overlap(double r, double A, double R, int n);

// Whole-space integral int |f|^p with analytic head/tail completion for
// radial fields (the completed fractions are reported); throws
// DivergenceError when an end law makes the integral infinite.
struct LebesgueIntegral {
    double value = 0.0;
    double head_fraction = 0.0;
    double tail_fraction = 0.0;
};
LebesgueIntegral lebesgue_integral(const RadialField& f, double p);
LebesgueIntegral lebesgue_integral(const GridField& f, double p);
double lebesgue_norm(const RadialField& f, double p);
double lebesgue_norm(const GridField& f, double p);

// Exact int_a^b |law(r)|^p r^{n-1} dr (quadrature only for linear cells).
double cell_law_integral(const CellLaw& law, double p, int n, double a, double b);

// Directory-based persistence: header.json + samples.f64 (native-endian
// doubles) + samples.csv (skipped above 100k cells).
void save_field(const RadialField& f, const std::string& dir);
void save_field(const GridField& f, const std::string& dir);
bool load_radial_field(const std::string& dir, RadialField& out);
bool load_grid_field(const std::string& dir, GridField& out);

} // namespace morrey
