#pragma once

#include <optional>

#include "morrey/estimate.hpp"
#include "morrey/field.hpp"
#include "morrey/shape.hpp"

namespace morrey {

// Controls for the ball-search supremum behind the weighted norm
//   ||f|| = sup_{B(a,R)} (1/phi(R)) ( |B|^{-1} int_B |f|^p )^{1/p}.
// Radii form a geometric lattice with ratio 2^{radius_step_log2/refine}
// anchored at the smallest radius, so raising refine produces a superset of
// the coarser lattice and the reported value can only go up.  Field
// breakpoints and the upper range end are always appended.  Centers are the
// origin plus every (radial_center_stride/refine)-th sample radius along the
// first axis (radial fields), or every (grid_center_stride/refine)-th node
// per axis anchored at the middle node (grid fields).
struct SearchOptions {
    int refine = 1;
    int grid_center_stride = 4;
    int radial_center_stride = 32;
    double radius_step_log2 = 0.25;
    bool centered_only = false;
    std::optional<double> radius_lo;
    std::optional<double> radius_hi;
};

// Weighted-ball-average norm of a radial field by exhaustive lattice search.
// The returned estimate carries the argmax ball, whether it sat on the radius
// lattice edge, and the relative gap to a half-density sublattice as the
// error indicator.  Throws DivergenceError when |f|^p r^{n-1} already fails
// to be integrable at the origin (every ball covering 0 has infinite mass).
NormEstimate morrey_norm(const RadialField& f, double p, const ShapeFunction& phi,
                         const SearchOptions& opt = {});
NormEstimate morrey_norm(const GridField& f, double p, const ShapeFunction& phi,
                         const SearchOptions& opt = {});

// Two-index norm sup_B |B|^{1/q - 1/p} ( int_B |f|^p )^{1/p}, realised as the
// weighted norm against phi(r) = |B(0,r)|^{-1/q}.
NormEstimate morrey_norm_classical(const RadialField& f, double p, double q,
                                   const SearchOptions& opt = {});
NormEstimate morrey_norm_classical(const GridField& f, double p, double q,
                                   const SearchOptions& opt = {});

} // namespace morrey
