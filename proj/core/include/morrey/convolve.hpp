#pragma once

#include <span>
#include <vector>

#include "morrey/field.hpp"
#include "morrey/kernel.hpp"
#include "morrey/quadrature.hpp"

namespace morrey {

// int_{B(0,h)} K = omega_{n-1} int_0^h r^{alpha-1} (1+r)^{-gamma} dr, the
// exact kernel mass of a small origin-centered ball (closed form for
// gamma = 0, edge-removed quadrature otherwise).
double singular_cell_mass(const KernelParams& k, double h,
                          const QuadratureOptions& opt = {});

// (K * f)(x) at |x| = R for a radial field f, by quadrature on the radial
// profile.  In one dimension the integral splits into the three smooth-plus-
// one-edge pieces F(r)K(R+r), F(R-w)K(w) and F(R+w)K(w); in higher dimension
// the kernel is first averaged over spheres, which turns the convolution
// into a weighted radial integral with a |R-r|^{alpha-1} collision edge.
// End laws of f complete the integral analytically beyond the sample range.
// Throws DivergenceError when the head law, the tail law, or (at R = 0) the
// combined kernel/head power makes the convolution infinite.
double apply_radial_at(const RadialField& f, const KernelParams& k, double R,
                       const QuadratureOptions& opt = {});

// Geometric output lattice spanning the sample range of f.
std::vector<double> default_output_radii(const RadialField& f, int per_decade = 24);

// K * f sampled on out_radii (default_output_radii when empty), returned as
// a radial field carrying f's breakpoints (the convolution kinks there).
RadialField apply_radial(const RadialField& f, const KernelParams& k,
                         std::vector<double> out_radii = {},
                         const QuadratureOptions& opt = {});

// Grid convolution: Auto picks direct summation at desk scale and the padded
// FFT for larger grids; Direct and Fast force the choice.
enum class GridConvMode { Auto, Direct, Fast };

// (K * f) h^n-weighted on f's own grid.  The singular tap at offset 0 uses
// the exact kernel mass of the inscribed ball plus a midpoint estimate of
// the corner remainder (exact in one dimension).  The fast path verifies
// itself against direct sums at eight fixed probe sites and throws
// AliasingError on disagreement.
GridField apply_grid(const GridField& f, const KernelParams& k,
                     GridConvMode mode = GridConvMode::Auto);

// Multilinear interpolation of a grid field at a point (zero outside).
double grid_interpolate(const GridField& f, std::span<const double> x);

// Field x -> f(lambda x) resampled on f's own grid by interpolation.
GridField dilate_grid(const GridField& f, double lambda);

// Relative deviation from the scaling identity
//   (K * f(lambda .))(x) = lambda^{-alpha} (K * f)(lambda x),
// which is exact for gamma = 0 and quantifies how far the (1+|x|)^{-gamma}
// factor is from scale invariance otherwise.  The radial form reports the
// largest deviation over the given probe radii (both sides are quadrature
// values, so pointwise comparison is meaningful).  The grid form averages
// the node-wise deviation over every node where lambda x stays inside the
// grid and the reference value exceeds 1% of its peak: sampled supports are
// quantized to the cell lattice, so single nodes adjacent to a support edge
// carry an O(sqrt(h)) mismatch that says nothing about the operator, while
// the average tracks the genuine commutation failure.
double dilation_defect(const RadialField& f, const KernelParams& k, double lambda,
                       const std::vector<double>& probe_radii,
                       const QuadratureOptions& opt = {});
double dilation_defect(const GridField& f, const KernelParams& k, double lambda,
                       GridConvMode mode = GridConvMode::Auto);

} // namespace morrey
