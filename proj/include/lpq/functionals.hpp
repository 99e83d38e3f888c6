#pragma once

// E- and K-functionals for the couples (l^0, l^q) and (l^p, l^q).
//
// For p = 0 the K-functional is computed exactly (up to enclosure widths)
// from the E-functional via K(t) = inf_m (m + t E(m)). For p > 0 there are
// two routes: a numerical oracle minimizing the defining infimum over
// decompositions (finite sequences), and the certified Holmstedt estimate
//   H(t) = (int_0^{t^a} xs(s)^p ds)^{1/p} + t (int_{t^a}^inf xs(s)^q ds)^{1/q}
// with 1/a = 1/p - 1/q and xs the unit-step extension of the rearranged
// sequence (second term dropped and exponent t^p when q = inf). K <= H
// always; H <= C_{p,q} K with a constant that is measured, not asserted.

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lpq/seqcore.hpp"

namespace lpq {

enum class KMethod { ExactOracle, FromE, Holmstedt };
const char* to_string(KMethod m);

struct KCurve {
    std::vector<double> grid;  // strictly increasing t
    std::vector<CertifiedValue> values;
    KMethod method = KMethod::FromE;

    // Nondecreasing, discretely concave, K(t)/t nonincreasing (midpoints, tol).
    void validate(double tol = 1e-9) const;
};

struct PiecewiseConvex {
    std::vector<std::pair<double, double>> breakpoints;  // increasing t, convex
    double eval(double t) const;                         // inside [t_first, t_last]
};

// E(t, s; l^0, l^q): tail q-sum past index [t] (the rearranged s is the Seq
// itself); for q = inf the ([t]+1)-th term.
CertifiedValue e_functional(const Seq& s, double t, double q);

// K(t, s; l^0, l^q) = inf_{m>=0} (m + t E(m, s)), certified branch-and-bound.
CertifiedValue k_from_e(const Seq& s, double t, double q);

struct OracleOptions {
    int starts = 16;
    int sweeps = 500;
    double rel_tol = 1e-10;
    bool with_grid_gap = false;  // dense-grid gap report, len <= 4 only
    double gap_step = 0.02;
};

struct OracleResult {
    double value = 0.0;
    std::vector<double> minimizer;
    double grid_gap = -1.0;  // |value - grid lower bound|; -1 when not computed
};

// K(t, x; l^p, l^q) for finite x by multi-start projected coordinate descent.
// Restricting to 0 <= u <= x is lossless: clamping u_k into [0, x_k]
// decreases |u_k| and |x_k - u_k| simultaneously, so both norms decrease.
OracleResult k_exact_oracle(const Seq& x, double t, const CoupleParams& couple,
                            const OracleOptions& opts = {});

CertifiedValue holmstedt(const Seq& x, double t, const CoupleParams& couple);

// Curve at t = n^{1/alpha} (n^{1/p} when q = inf) with values
// (P_p x)_n + n^{1/alpha} (Q_q x)_n  (only the first term when q = inf).
KCurve holmstedt_grid(const Seq& x, const CoupleParams& couple, std::size_t N);

// Greatest convex minorant (lower hull) of points with strictly increasing t.
PiecewiseConvex convex_minorant(std::span<const std::pair<double, double>> points);

struct ImplReport {
    Verdict verdict = Verdict::Undecided;
    bool hypothesis_certified = false;
    double worst_margin = 0.0;  // min over the grid of (rhs.lo - lhs.hi)
    std::string detail;
};

// E(t,y) <= E(t,x) for all t  ==>  K(t,y) <= K(t,x) for all t, on (l^0, l^q).
// Refuses (hypothesis_certified = false) when the hypothesis cannot be
// certified up to `horizon`; that is distinct from a failed conclusion.
ImplReport check_impl1(const Seq& x, const Seq& y, double q, std::span<const double> grid,
                       std::uint64_t horizon);

// K(t,y) <= C K(t,x) for all t  ==>  E(t,y) <= 2C E(t/(2C), x), on (l^0, l^q);
// the conclusion is checked at integer t up to `horizon`.
ImplReport check_impl2(const Seq& x, const Seq& y, double C, double q,
                       std::span<const double> grid, std::uint64_t horizon);

// sup_t K(t,y)/K(t,x). Lower bound from the grid; upper bound on the grid's
// span from K nondecreasing + K(t)/t nonincreasing (consecutive-ratio mesh
// factor), extended past the ends when the sup there is analytically capped.
CertifiedValue k_majorization_constant(const Seq& x, const Seq& y, const CoupleParams& couple,
                                       std::span<const double> grid);

// K dispatch: p = 0 -> k_from_e; p > 0 -> holmstedt enclosure.
CertifiedValue k_certified(const Seq& s, double t, const CoupleParams& couple);

// 2^{-k}..2^k, optionally joined with the breakpoints n^{1/alpha}.
std::vector<double> dyadic_grid(int k);
std::vector<double> default_grid(const CoupleParams& couple, int k = 20,
                                 std::size_t breakpoints = 64);

}  // namespace lpq
