#pragma once

#include <vector>

namespace morrey {

// How a norm value was obtained, plus enough diagnostics to judge it.
struct NormEstimate {
    enum class Method { ClosedForm, Quadrature, BallSearch };

    double value = 0.0;
    Method method = Method::ClosedForm;

    // Relative error indicator. For quadrature: achieved estimate.  For ball
    // search: relative gap between the full lattice and its half-density
    // sublattice (a refinement can never drop the value by more than this).
    double error_indicator = 0.0;

    // Ball-search diagnostics; meaningful only when method == BallSearch.
    std::vector<double> argmax_center;
    double argmax_radius = 0.0;
    bool radius_edge_pinned = false; // sup sat at the smallest/largest lattice radius
    bool offcenter_argmax = false;   // best ball was not centered at the origin
    long centers = 0;
    long radii = 0;
};

} // namespace morrey
