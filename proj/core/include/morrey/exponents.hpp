#pragma once

#include <optional>
#include <sstream>

#include "morrey/constants.hpp"
#include "morrey/errors.hpp"

namespace morrey {

// Output-side exponents for the convolution bound:
//   1/p2 = 1/p1 - 1/s',   1/q2 = 1/q1 - 1/t'.
// q1/q2 track the second Morrey index and may be absent; q2 is also dropped
// (with a flag) when 1/q2 <= 0, which happens exactly when the tail condition
// on the shape function fails.  1/x' is always computed as 1 - 1/x so the
// sentinel x = 1 (dual +inf) needs no special casing.
struct SolvedExponents {
    double p1, s, t;
    double p2;
    double s_dual; // +inf when s = 1
    double t_dual; // +inf when t = 1
    std::optional<double> q1;
    std::optional<double> q2;
    bool q2_infeasible = false; // q1 given but 1/q1 - 1/t' <= 0
};

inline SolvedExponents solve_exponents(double p1, double s,
                                       std::optional<double> q1, double t) {
    if (!(p1 >= 1.0)) throw InfeasibleExponentError("need p1 >= 1");
    if (!(s >= 1.0)) throw InfeasibleExponentError("need s >= 1");
    if (!(t >= 1.0)) throw InfeasibleExponentError("need t >= 1");

    SolvedExponents e;
    e.p1 = p1;
    e.s = s;
    e.t = t;
    e.s_dual = dual_exponent(s);
    e.t_dual = dual_exponent(t);

    const double inv_p2 = 1.0 / p1 - (1.0 - 1.0 / s);
    if (!(inv_p2 > 0.0)) {
        std::ostringstream os;
        os << "no p2 solves 1/p2 = 1/p1 - 1/s': p1 = " << p1 << " >= s' = "
           << e.s_dual;
        throw InfeasibleExponentError(os.str());
    }
    e.p2 = 1.0 / inv_p2;

    if (q1) {
        if (!(*q1 >= 1.0)) throw InfeasibleExponentError("need q1 >= 1");
        e.q1 = q1;
        const double inv_q2 = 1.0 / *q1 - (1.0 - 1.0 / t);
        if (inv_q2 > 0.0)
            e.q2 = 1.0 / inv_q2;
        else
            e.q2_infeasible = true;
    }
    return e;
}

} // namespace morrey
