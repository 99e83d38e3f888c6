#pragma once

// Majorization checks and the constructive two-operator split: when the
// per-index Holmstedt sums of y are dominated by those of x, the index set
// decomposes into maximal intervals where the head p-power surplus
// A(n) = Sum_{k<=n} (x_k^p - y_k^p) is nonnegative (A-blocks) and where the
// tail q-power surplus B(n) = Sum_{k>=n} (x_k^q - y_k^q) is nonnegative
// (B-blocks); A u B covers everything. Per block, y restricted to the block
// is head- (resp. tail-) majorized by x restricted to the block, which lets
// greedy mass transports build T (on A) and S (on B \ A) with y = Tx + Sx
// exactly. Transport norms are measured and reported against the reference
// constants 8^{1/p}, 2^{1/p} (head) and 18, 12 (tail); the builders are
// substitutes for external constructions, so exceedances are informational.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "lpq/opnorms.hpp"
#include "lpq/seqcore.hpp"

namespace lpq {

struct IntervalBlock {
    std::uint64_t first = 0, last = 0;  // inclusive, 1-based
    bool open_ended = false;            // true: extends past the horizon
};

struct IntervalPartition {
    std::vector<IntervalBlock> a_blocks, b_blocks;
    std::uint64_t horizon = 0;
    Verdict coverage = Verdict::Undecided;
    std::uint64_t uncovered_index = 0;  // witness when coverage != Pass
};

struct MajorizeReport {
    Verdict verdict = Verdict::Undecided;
    double min_margin = 0.0;            // min over n of (rhs.lo - lhs.hi)
    std::uint64_t first_violation = 0;  // 0 when none
};

struct BlockCertificate {
    IntervalBlock block;
    enum class Kind { Head, Tail } kind = Kind::Head;
    Verdict verdict = Verdict::Undecided;
    double margin = 0.0;
    std::uint64_t failure_index = 0;
};

// Sum_{k<=n} y_k^p <= Sum_{k<=n} x_k^p for all n <= horizon (and certified
// past it from the tail models when possible).
MajorizeReport head_majorizes(const Seq& x, const Seq& y, double p, std::uint64_t horizon);

// Sum_{k>=n} y_k^q <= C * Sum_{k>=[(n-1)/C]+1} x_k^q for all n <= horizon.
MajorizeReport tail_majorizes_shifted(const Seq& x, const Seq& y, double q, double C,
                                      std::uint64_t horizon);

// Per-n comparison of (P_p .)_n + n^{1/alpha} (Q_q .)_n.
MajorizeReport holmstedt_majorizes(const Seq& x, const Seq& y, const CoupleParams& couple,
                                   std::uint64_t horizon);

IntervalPartition ab_partition(const Seq& x, const Seq& y, const CoupleParams& couple,
                               std::uint64_t horizon);

std::vector<BlockCertificate> block_certificates(const Seq& x, const Seq& y,
                                                 const IntervalPartition& partition,
                                                 const CoupleParams& couple);

// Greedy transport on p-th powers over one head-certified block; exact
// reproduction T(chi_block x) = chi_block y.
OperatorMatrix build_head_transfer(const Seq& x, const Seq& y, double p,
                                   const IntervalBlock& block);

// Right-to-left transport on q-th powers over one tail-certified block.
OperatorMatrix build_tail_transfer(const Seq& x, const Seq& y, double q, double C,
                                   const IntervalBlock& block);

struct SplitResult {
    OperatorMatrix T, S;
    double residual = 0.0;  // max_k |y_k - (Tx)_k - (Sx)_k|
    NormReport t_norm_p, t_norm_inf, s_norm_0, s_norm_q;
    double t_target_p = 0.0, t_target_inf = 0.0;  // 8^{1/p}, 2^{1/p}
    double s_target_0 = 18.0, s_target_q = 12.0;
    IntervalPartition partition;
};

SplitResult split_operator(const Seq& x, const Seq& y, const CoupleParams& couple,
                           std::uint64_t horizon);

// The explicit two-column-support operator for the (l^0, l^inf) couple:
// S = 2 * diag(y_k / (2 (D_2 x)_k)) * D_2, valid when y_k <= 2 (D_2 x)_k.
OperatorMatrix orbit_op_l0_linf(const Seq& x, const Seq& y);

struct SqReport {
    Verdict equal_mass = Verdict::Undecided;      // Sum |x|^q == Sum |y|^q
    Verdict head_condition = Verdict::Undecided;  // Sum_{n<=m} x*^q <= Sum_{n<=m} y*^q
    Verdict lsz_tail = Verdict::Undecided;        // Sum_{n>=m} y*^q <= Sum_{n>=m} x*^q
    bool replay_ran = false;
    Verdict replay_hypothesis = Verdict::Undecided;  // tails of y vs u = 2 D_2 x*
    Verdict replay_head = Verdict::Undecided;        // heads: u vs z*
    Verdict replay_norm = Verdict::Undecided;        // ||y||_r <= ||z||_r
    Seq u, z;
};

// Checks the equal-mass/head-domination pair for (x, y); in replay mode
// builds u = 2 D_2 x* and the bumped z and certifies the derived
// inequalities in the target space l^r.
SqReport sq_check(const Seq& x, const Seq& y, double q, double r, bool replay);

nlohmann::json partition_to_json(const IntervalPartition& p);
std::string certificates_csv(std::span<const BlockCertificate> certs);

}  // namespace lpq
