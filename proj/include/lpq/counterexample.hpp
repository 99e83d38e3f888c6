#pragma once

// Constructive non-K-monotonicity machinery: the keep-head/stretch-tail
// sequence transform, its integral identities, the iterative generator that
// flattens a given g in l^q \ l^p while preserving its l^q norm and its tail
// q-sums dominance, and the unbounded-norm witnesses for couples with q < 1.
//
// The generator runs one of four regimes depending on (p, r):
//   p>0, r<inf : step picks gamma_n (tail q-mass <= 1/n), a_{n+1}, delta_{n+1}
//                (head p-mass condition), then the minimal b_{n+1} meeting the
//                head/tail damping conditions at the constraint points;
//   p>0, r=inf : only the head damping condition constrains b;
//   p=0, r<inf : only the tail damping conditions constrain b;
//   p=0, r=inf : b comes from a closed formula on point values.
// Every chosen quantity is re-certified against its defining inequality in
// interval arithmetic; the trace records (n, a_n, b_n, gamma_n, delta_n) and
// regime-appropriate ratio checkpoints.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "lpq/opnorms.hpp"
#include "lpq/seqcore.hpp"
#include "lpq/stepfun.hpp"

namespace lpq {

struct StretchParams {
    std::uint64_t a = 1, b = 1;
    double q = 1.0;
};

// Sequence form of the transform: keeps the first a entries; each later
// entry is repeated b times and scaled by b^{-1/q}. Power tails are
// materialized up to `horizon` (the exact transform of an infinite tail is a
// staircase the Seq model cannot carry; use StretchChain for certified work).
Seq tail_stretch(const Seq& h, const StretchParams& prm, std::size_t horizon = 4096);

struct LemmaTabReport {
    Verdict head_convergence = Verdict::Undecided;   // item 1
    Verdict tail_domination = Verdict::Undecided;    // item 2
    Verdict head_equality = Verdict::Undecided;      // item 3
    Verdict tail_r_vanishes = Verdict::Undecided;    // item 4
    Verdict tail_r_threshold = Verdict::Undecided;   // item 5
    Verdict overall = Verdict::Undecided;
    double item1_final_gap = 0.0;
    double item4_final_tail = 0.0;
    struct ThresholdRecord {
        double t = 0.0;
        double threshold = 0.0;
        std::uint64_t minimal_passing_b = 0;
        bool skipped = false;  // tail r-mass at t not positive
    };
    std::vector<ThresholdRecord> item5;
    std::string detail;
};

// Numerical verification of the transform's five integral properties along a
// doubling ladder b = 1, 2, 4, ..., b_max.
LemmaTabReport lemma_tab_verify(const Seq& h, std::uint64_t a, double p, double q, double r,
                                std::span<const double> t_grid, std::uint64_t b_max = 1u << 16);

enum class Regime { PposRfin, PposRinf, P0Rfin, P0Rinf };
const char* to_string(Regime r);

struct TraceStep {
    int n = 0;
    BigFloat a, b, gamma, delta;
};

struct Checkpoint {
    int n = 0;
    BigFloat t;
    XInterval value_f, value_g;  // K-values (or point values in the p=0, r=inf regime)
    double ratio_lo = 0.0, ratio_hi = 0.0;
};

struct CounterexampleTrace {
    Regime regime = Regime::P0Rinf;
    double p = 0.0, q = 0.0, r = 0.0;
    std::vector<TraceStep> steps;
    std::vector<Checkpoint> checkpoints;
};

struct GenResult {
    Seq f;  // stabilized prefix, zero tail past the materialization horizon
    CounterexampleTrace trace;
    CertifiedValue f_norm_q, g_norm_q;  // certified l^q norms
    BigFloat stabilized_to;             // f equals the final chain on [0, this)
};

// The spec's default exponent for g = (n^{-sigma}): the midpoint of the
// admissible interval (1/q, min(1/p, 1/q + 1)); 1/q + 1/2 when p = 0.
double default_sigma(double p, double q);

GenResult gen_counterexample(const Seq& g, double p, double q, double r, int steps,
                             std::size_t f_horizon = 4096);

struct VerifyReport {
    Verdict steps_certified = Verdict::Undecided;   // per-step conditions re-checked
    Verdict mass_conserved = Verdict::Undecided;    // ||f||_q == ||g||_q
    double mass_width = 0.0;
    Verdict tail_domination = Verdict::Undecided;   // Sum_{j>=m} g^q <= Sum_{j>=m} f^q
    std::uint64_t tail_checked_to = 0;
    Verdict stabilization = Verdict::Undecided;     // f prefix matches the chain
    std::vector<Checkpoint> checkpoints;
    double least_ratio = 0.0;                       // min over checkpoints of ratio_hi
    std::string notes;
};

// Rebuilds the chain from (g, trace), re-certifies every step, and evaluates
// the regime's ratio checkpoints.
VerifyReport verify_counterexample(const Seq& f, const Seq& g, double p, double q, double r,
                                   const CounterexampleTrace& trace,
                                   std::uint64_t tail_horizon = 4096);

struct WitnessResult {
    Seq x, y;
    std::uint64_t N = 0;
    double bound = 0.0;      // certified lower bound for ||S||_{l^q -> l^q} over all S with Sx = y
    double c_hat = 1.0;      // measured almost-increasing constant (p > 0 only)
    Verdict hypothesis = Verdict::Undecided;
};

// The q < 1 witness pair: y = e_1 and a flat x whose length forces every
// operator mapping x to y to have l^q norm > C.
WitnessResult cm_witness(double p, double q, double C, std::uint64_t seed = 20250809);

// Exact column-formula norm of S, asserted against `bound` (defaults to
// N^{1/q-1}, the p = 0 witness bound). Throws if Sx != y.
Verdict cm_witness_verify(const Seq& x, const Seq& y, std::uint64_t N, double q,
                          const OperatorMatrix& S, double bound);
Verdict cm_witness_verify(const Seq& x, const Seq& y, std::uint64_t N, double q,
                          const OperatorMatrix& S);

nlohmann::json trace_to_json(const CounterexampleTrace& trace);
std::string ratios_csv(const CounterexampleTrace& trace);

// JSON scalar for extended-range values: a number when it fits a double,
// a decimal-scientific string otherwise.
nlohmann::json big_to_json(const BigFloat& v);

}  // namespace lpq
