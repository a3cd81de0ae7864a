#pragma once

#include <optional>
#include <string>
#include <vector>

#include "morrey/convolve.hpp"
#include "morrey/estimate.hpp"
#include "morrey/exponents.hpp"
#include "morrey/field.hpp"
#include "morrey/kernel.hpp"
#include "morrey/norm.hpp"
#include "morrey/shape.hpp"

namespace morrey {

// One precondition of an inequality, checked numerically.  A false entry
// never aborts a report: the whole point of the harness is to show what the
// measured constants do when a hypothesis is dropped.
struct HypothesisCheck {
    std::string name;
    bool holds = false;
    double constant = 0.0; // best constant found (infinity when divergent)
    std::string note;
};

// Named test function; lambda > 0 marks the member of the dilation family
// f_lambda(x) = chi_{B(0,1)}(lambda x) it realises, 0 the standalone fields.
struct CorpusMember {
    std::string name;
    RadialField field;
    double lambda = 0.0;
};

// Six standard test fields: the unit-ball indicator at dilations
// lambda = 1/4, 1, 4, a unit gaussian, a power bump, and the weight profile
// f0(x) = phi(|x|).
std::vector<CorpusMember> default_corpus(const RadialSpec& spec, const ShapeFunction& phi);

// ||K||_{L^{s,t}}: closed form for gamma = 0 at the critical second index
// t = n/(n-alpha) (or a forced lattice search over the sampled kernel),
// DivergenceError outside the membership region, sampled ball search inside
// it for gamma > 0.
NormEstimate kernel_morrey_norm(const KernelParams& k, double s, double t,
                                const RadialSpec& spec = {},
                                const SearchOptions& opt = {},
                                bool force_search = false);

// ---------------------------------------------------------------------------
// Convolution bound ||K*f||_q <= ||K||_t ||f||_p, 1/q = 1/p - 1/t'.

struct YoungMember {
    std::string name;
    double lambda = 0.0;
    double f_norm = 0.0;    // ||f||_p
    double conv_norm = 0.0; // ||K*f||_q
    double ratio = 0.0;     // conv_norm / (||K||_t f_norm)
    bool vacuous = false;   // ||f||_p infinite: nothing to check
    bool pass = false;
    std::string note;
};

struct YoungReport {
    KernelParams kernel;
    double p = 0.0, t = 0.0, q = 0.0;
    double delta = 0.05; // discretization allowance on the ratio
    double kernel_norm = 0.0;
    std::vector<YoungMember> members;
    double max_ratio = 0.0;
    bool pass = false;
};

// Single test function.  Throws InfeasibleExponentError when p >= t' leaves
// no q, and DivergenceError when t is outside the kernel's Lebesgue range.
YoungMember young_ratio(const RadialField& f, const KernelParams& k, double p, double t,
                        double delta = 0.05, const QuadratureOptions& opt = {});
YoungReport young_report(const std::vector<CorpusMember>& corpus, const KernelParams& k,
                         double p, double t, double delta = 0.05,
                         const QuadratureOptions& opt = {});

// ---------------------------------------------------------------------------
// Upper estimate ||I f||_{p2,psi} <= C ||K||_{s,t} ||f||_{p1,phi} with
// psi = phi r^{n/t'} and 1/p2 = 1/p1 - 1/s'.

struct MemberResult {
    std::string name;
    double lambda = 0.0;
    double lhs = 0.0;     // ||I f||_{p2,psi}
    double rhs = 0.0;     // reference product (see the report that owns it)
    double ratio = 0.0;
    bool vacuous = false; // a side is infinite; excluded from the empirical max
    std::string note;
};

struct UpperBoundReport {
    KernelParams kernel;
    SolvedExponents exps;
    std::string phi_desc, psi_desc;
    std::vector<HypothesisCheck> hypotheses;
    NormEstimate kernel_norm; // ||K||_{s,t}
    std::vector<MemberResult> members; // ratio = lhs / (||K||_{s,t} ||f||_{p1,phi})
    double max_ratio = 0.0;        // empirical C
    double dilation_spread = 1.0;  // max/min ratio over the dilation family
    bool pass = false; // max_ratio finite and spread < 2
};

// Throws InfeasibleExponentError when no p2 exists and DivergenceError when
// ||K||_{s,t} itself is infinite; every other broken precondition is
// reported in the hypothesis panel instead of refusing to run.
UpperBoundReport theorem_report(const std::vector<CorpusMember>& corpus,
                                const KernelParams& k, double p1, double s, double t,
                                const ShapeFunction& phi, const RadialSpec& spec = {},
                                const SearchOptions& opt = {});

// ---------------------------------------------------------------------------
// Operator-norm lower bound from f0(x) = phi(|x|): the chain
//   c ||rho K||_{p2,psi} <= ||I f0||_{p2,psi} <= ratio0-normalised operator norm,
// with rho = phi r^n, plus ||K||_{p1,t} as the closed-form comparison point.

struct LowerBoundReport {
    KernelParams kernel;
    SolvedExponents exps;
    std::string phi_desc;
    std::vector<HypothesisCheck> hypotheses;
    NormEstimate f0_norm;              // ||f0||_{p1,phi}, expected near 1 for classed phi
    double bracket_lo = 0.0, bracket_hi = 0.0; // centered-ball bracket for f0_norm
    std::optional<RadialField> if0;    // K * f0 profile (plot export)
    NormEstimate if0_norm;             // ||I f0||_{p2,psi}
    NormEstimate rho_k_norm;           // ||rho K||_{p2,psi}
    NormEstimate kernel_norm_p1t;      // ||K||_{p1,t}
    double ratio0 = 0.0;               // if0_norm / f0_norm
    double c_pointwise = 0.0;          // min I f0 / (rho K) over the central decades
    double c_norm = 0.0;               // rho_k_norm / if0_norm
    double c_lower = 0.0;              // ratio0 / ||K||_{p1,t}
    bool pass = false;                 // ratio0 > 0 with finite extracted constants
};

// p2 must solve 1/p2 = 1/p1 - 1/s' (InfeasibleExponentError otherwise).  A
// divergent condition (III) integral is a hard DivergenceError; every other
// broken hypothesis is panel-reported.
LowerBoundReport lower_bound_f0(const ShapeFunction& phi, const KernelParams& k,
                                double p1, double p2, double s, double t,
                                const RadialSpec& spec = {},
                                const SearchOptions& opt = {});

// ---------------------------------------------------------------------------
// Two-sided estimate
//   C4 ||K||_{p1,t} <= ||I||_{(p1,phi) -> (p2,psi)} <= C5 ||K||_{s,t},
// with the operator norm estimated from below over corpus + f0.  C4 and C5
// are extracted constants; they are NOT comparable to each other.

struct TwoSidedReport {
    KernelParams kernel;
    SolvedExponents exps;
    std::string phi_desc, psi_desc;
    std::vector<HypothesisCheck> hypotheses;
    double kernel_norm_p1t = 0.0, kernel_norm_st = 0.0;
    std::vector<MemberResult> members; // ratio = ||I f||_{p2,psi} / ||f||_{p1,phi}
    double norm_estimate = 0.0;        // max member ratio (operator-norm lower bound)
    double dilation_spread = 1.0;
    LowerBoundReport f0;
    double c4 = 0.0, c5 = 0.0;
    bool pass = false;
};

TwoSidedReport two_sided_report(const ShapeFunction& phi, const KernelParams& k,
                                double p1, double s, double t,
                                const std::vector<CorpusMember>& corpus,
                                const RadialSpec& spec = {},
                                const SearchOptions& opt = {});

// ---------------------------------------------------------------------------
// Small-alpha sweep at the critical second index t = n/(n-alpha): the
// closed-form column behaves like C/alpha, so its log-log slope against
// alpha sits near -1.

struct SweepRow {
    double alpha = 0.0, t = 0.0;
    double closed = 0.0; // ||K_alpha||_{p1,t} antiderivative value (gamma = 0)
    double ball = 0.0;   // same norm by forced lattice search
    double ratio0 = 0.0; // lower_bound_f0 ratio on a per-alpha exponent schedule
};

struct SweepReport {
    double p1 = 0.0;
    int dim = 1;
    double gamma = 0.0;
    std::vector<SweepRow> rows;
    double slope = 0.0; // least-squares d ln(closed) / d ln(alpha)
};

SweepReport alpha_sweep(const std::vector<double>& alphas, double p1, int n,
                        double gamma = 0.0, const RadialSpec& spec = {},
                        const SearchOptions& opt = {});

} // namespace morrey
